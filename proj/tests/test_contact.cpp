#include <random>

#include "doctest.h"
#include "trayplan/contact.hpp"
#include "trayplan/polycone.hpp"

using namespace trayplan;

namespace {

std::mt19937 rng(99);

Vec3 rand_unit() {
  std::normal_distribution<double> g(0.0, 1.0);
  return Vec3(g(rng), g(rng), g(rng)).normalized();
}

ContactSet square_base(double half, double mu) {
  ContactSet cs;
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      cs.contacts.push_back(
          make_contact_point(Vec3(sx * half, sy * half, 0), Vec3::UnitZ(), mu));
  return cs;
}

// static gravito-inertial wrench of a unit mass with CoM at c, g = -9.81 z
Wrench static_wrench(const Vec3& c) {
  InertialParams p = InertialParams::from_com_inertia(1.0, c, Mat3::Identity());
  SpatialVelocity xi;
  SpatialAccelGrav eta;
  eta.eta << 0, 0, 0, 0, 0, 9.81;
  return giw(p, xi, eta);
}

}  // namespace

TEST_CASE("make_contact_point builds right-handed orthonormal tangents") {
  for (int t = 0; t < 50; ++t) {
    Vec3 n = rand_unit();
    ContactPoint cp = make_contact_point(Vec3::Zero(), n, 0.3);
    CHECK(std::abs(cp.t1.norm() - 1.0) < 1e-10);
    CHECK(std::abs(cp.t2.norm() - 1.0) < 1e-10);
    CHECK(std::abs(cp.t1.dot(cp.t2)) < 1e-10);
    CHECK(std::abs(cp.t1.dot(n)) < 1e-10);
    CHECK((cp.t1.cross(cp.t2) - n).norm() < 1e-10);
  }
  CHECK_THROWS_AS(make_contact_point(Vec3::Zero(), Vec3(0, 0, 2), 0.3),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_contact_point(Vec3::Zero(), Vec3::UnitZ(), -0.1),
                  std::invalid_argument);
  // degenerate case: normal along x, t1 falls back to the y-axis projection
  ContactPoint cx = make_contact_point(Vec3::Zero(), Vec3::UnitX(), 0.3);
  CHECK(std::abs(cx.t1.dot(Vec3::UnitX())) < 1e-10);
}

TEST_CASE("friction_face matches the 5-row template") {
  ContactPoint cp = make_contact_point(Vec3::Zero(), Vec3::UnitZ(), 0.5);
  auto F = friction_face(cp);
  Eigen::VectorXd m = F * Vec3(0, 0, 1);
  CHECK(m(0) == doctest::Approx(-1.0));
  for (int i = 1; i < 5; ++i) CHECK(m(i) == doctest::Approx(-0.5));
  CHECK((F * Vec3(0.6, 0, 1)).maxCoeff() == doctest::Approx(0.1));

  ContactPoint c0 = make_contact_point(Vec3::Zero(), Vec3::UnitZ(), 0.0);
  CHECK((friction_face(c0) * Vec3(0.01, 0, 1)).maxCoeff() > 0);
  CHECK((friction_face(c0) * Vec3(0, 0, 1)).maxCoeff() <= 1e-15);
}

TEST_CASE("grasp_matrix gives torque r cross f") {
  ContactPoint origin = make_contact_point(Vec3::Zero(), Vec3::UnitZ(), 0.5);
  auto G0 = grasp_matrix(origin);
  CHECK(G0.topRows<3>().isZero(0));
  CHECK(G0.bottomRows<3>().isApprox(Mat3::Identity()));

  ContactPoint cx = make_contact_point(Vec3(1, 0, 0), Vec3::UnitZ(), 0.5);
  CHECK((grasp_matrix(cx) * Vec3(0, 0, 1)).head<3>().isApprox(Vec3(0, -1, 0)));

  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    Vec3 r(g(rng), g(rng), g(rng)), f(g(rng), g(rng), g(rng));
    ContactPoint cp = make_contact_point(r, rand_unit(), 0.2);
    Vec6 w = grasp_matrix(cp) * f;
    CHECK((w.head<3>() - r.cross(f)).norm() < 1e-12);
    CHECK((w.tail<3>() - f).norm() < 1e-12);
  }
}

TEST_CASE("cwc_face: single contact at the origin") {
  ContactSet cs;
  cs.contacts.push_back(make_contact_point(Vec3::Zero(), Vec3::UnitZ(), 0.5));
  Eigen::MatrixXd H = cwc_face(cs);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    Wrench w;
    for (int i = 0; i < 6; ++i) w.w(i) = g(rng);
    // mix in realizable wrenches
    if (t % 3 == 0) {
      Vec3 f(0.2 * g(rng), 0.2 * g(rng), std::abs(g(rng)) + 1.0);
      w.w << 0, 0, 0, f;
    }
    const bool face_in = (H * w.w).maxCoeff() <= 1e-7;
    CHECK(face_in == force_lp(cs, w).feasible);
  }
}

TEST_CASE("cwc_face: zero friction single contact is the normal ray") {
  ContactSet cs;
  cs.contacts.push_back(make_contact_point(Vec3::Zero(), Vec3::UnitZ(), 0.0));
  Eigen::MatrixXd H = cwc_face(cs);
  Wrench up;
  up.w << 0, 0, 0, 0, 0, 1;
  CHECK((H * up.w).maxCoeff() <= 1e-10);
  Wrench tang;
  tang.w << 0, 0, 0, 0.01, 0, 1;
  CHECK((H * tang.w).maxCoeff() > 1e-8);
  Wrench torque;
  torque.w << 0.01, 0, 0, 0, 0, 1;
  CHECK((H * torque.w).maxCoeff() > 1e-8);
}

TEST_CASE("cwc_face: static stability over a square base") {
  ContactSet cs = square_base(0.075, 0.2);
  Eigen::MatrixXd H = cwc_face(cs);
  CHECK((H * static_wrench(Vec3(0.05, 0.0, 0.1)).w).maxCoeff() <= 1e-8);
  CHECK((H * static_wrench(Vec3(0, 0, 0.3)).w).maxCoeff() <= 1e-8);
  CHECK((H * static_wrench(Vec3(0.2, 0, 0)).w).maxCoeff() > 1e-6);
  CHECK((H * static_wrench(Vec3(0.0, -0.1, 0.05)).w).maxCoeff() > 1e-6);
}

TEST_CASE("force_lp basics") {
  ContactSet cs = square_base(0.075, 0.2);
  Wrench zero;
  ForceLpResult r0 = force_lp(cs, zero);
  CHECK(r0.feasible);
  CHECK(r0.zeta.norm() < 1e-6);

  // supporting wrench: pure upward force through the centroid
  Wrench up;
  up.w << 0, 0, 0, 0, 0, 9.81;
  ForceLpResult ru = force_lp(cs, up);
  REQUIRE(ru.feasible);
  Eigen::MatrixXd G(6, 12);
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(20, 12);
  for (int i = 0; i < 4; ++i) {
    G.middleCols<3>(3 * i) = grasp_matrix(cs.contacts[i]);
    F.block<5, 3>(5 * i, 3 * i) = friction_face(cs.contacts[i]);
  }
  CHECK((G * ru.zeta - up.w).norm() < 1e-7);
  CHECK((F * ru.zeta).maxCoeff() <= 1e-7);

  // contacts cannot push the object down
  Wrench down;
  down.w << 0, 0, 0, 0, 0, -1;
  CHECK(!force_lp(cs, down).feasible);
}

TEST_CASE("robust_vertex_params") {
  ComBox degenerate;
  degenerate.vertices.assign(8, Vec3(0.1, 0.2, 0.3));
  CHECK(robust_vertex_params(degenerate).size() == 1);

  ComBox cube = make_com_box(Vec3(-0.5, -0.5, -0.5), Vec3(0.5, 0.5, 0.5));
  auto params = robust_vertex_params(cube);
  REQUIRE(params.size() == 8);
  const Mat3 Icube = uniform_cuboid_inertia(1.0, Vec3::Ones());
  CHECK(Icube.isApprox(Mat3::Identity() / 6.0, 1e-12));
  for (const auto& p : params) {
    CHECK(p.mass() == doctest::Approx(1.0));
    CHECK(p.inertia_about_com().isApprox(Icube, 1e-12));
    bool at_corner = false;
    for (const Vec3& v : cube.vertices)
      if ((p.com() - v).norm() < 1e-12) at_corner = true;
    CHECK(at_corner);
  }

  ComBox tray_box = make_com_box(Vec3(-0.06, -0.06, 0.0), Vec3(0.06, 0.06, 0.2));
  CHECK(robust_vertex_params(tray_box).size() == 8);
}

TEST_CASE("sticking_margins: static cases") {
  ContactSet cs = square_base(0.075, 0.2);
  Eigen::MatrixXd H = cwc_face(cs);
  SpatialVelocity xi;
  SpatialAccelGrav eta;
  eta.eta << 0, 0, 0, 0, 0, 9.81;

  ComBox inside = make_com_box(Vec3(-0.05, -0.05, 0.0), Vec3(0.05, 0.05, 0.1));
  Eigen::MatrixXd M = sticking_margins(H, xi, eta, robust_vertex_params(inside));
  CHECK(M.maxCoeff() < 0);
  // agreement with the force decomposition oracle at every vertex
  for (const auto& p : robust_vertex_params(inside))
    CHECK(force_lp(cs, giw(p, xi, eta)).feasible);

  ComBox outside = make_com_box(Vec3(-0.05, -0.05, 0.0), Vec3(0.2, 0.05, 0.1));
  Eigen::MatrixXd Mo =
      sticking_margins(H, xi, eta, robust_vertex_params(outside));
  CHECK(Mo.maxCoeff() > 0);
  bool some_infeasible = false;
  for (const auto& p : robust_vertex_params(outside))
    if (!force_lp(cs, giw(p, xi, eta)).feasible) some_infeasible = true;
  CHECK(some_infeasible);

  // free fall: the zero wrench sits on every cone boundary
  SpatialAccelGrav zero;
  Eigen::MatrixXd Mz = sticking_margins(H, xi, zero, robust_vertex_params(inside));
  CHECK(Mz.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("face/LP equivalence on random contact sets") {
  std::uniform_int_distribution<int> nc_dist(1, 4);
  std::uniform_real_distribution<double> mu_dist(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    ContactSet cs;
    const int nc = nc_dist(rng);
    for (int i = 0; i < nc; ++i)
      cs.contacts.push_back(make_contact_point(
          0.1 * Vec3(g(rng), g(rng), g(rng)), rand_unit(), mu_dist(rng)));
    Eigen::MatrixXd H = cwc_face(cs);
    for (int t = 0; t < 100; ++t) {
      Wrench w;
      for (int i = 0; i < 6; ++i) w.w(i) = g(rng);
      if (t % 2 == 0) {
        // realizable wrench from random admissible forces
        w.w.setZero();
        for (const ContactPoint& cp : cs.contacts) {
          Vec3 f = std::abs(g(rng)) * cp.normal;
          f += 0.5 * cp.mu * f.norm() * (g(rng) * cp.t1 + g(rng) * cp.t2).normalized();
          if ((friction_face(cp) * f).maxCoeff() <= 0)
            w.w += grasp_matrix(cp) * f;
        }
      }
      const double margin = (H * w.w).maxCoeff();
      if (std::abs(margin) < 1e-9) continue;  // skip boundary ties
      CHECK((margin <= 0) == force_lp(cs, w).feasible);
    }
  }
}

TEST_CASE("vertex sufficiency for convex CoM combinations") {
  ContactSet cs = square_base(0.075, 0.3);
  Eigen::MatrixXd H = cwc_face(cs);
  ComBox box = make_com_box(Vec3(-0.06, -0.06, 0.0), Vec3(0.06, 0.06, 0.15));
  auto verts = robust_vertex_params(box);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    SpatialVelocity xi;
    SpatialAccelGrav eta;
    for (int i = 0; i < 6; ++i) {
      xi.xi(i) = g(rng);
      eta.eta(i) = g(rng);
    }
    Eigen::VectorXd lam(verts.size());
    for (int i = 0; i < lam.size(); ++i) lam(i) = u(rng);
    lam /= lam.sum();
    InertialParams mix;
    for (size_t i = 0; i < verts.size(); ++i) mix.theta += lam(i) * verts[i].theta;
    Eigen::MatrixXd M = sticking_margins(H, xi, eta, verts);
    const double vmax = M.maxCoeff();
    const double mmax = sticking_margins(H, xi, eta, {mix}).maxCoeff();
    CHECK(mmax <= vmax + 1e-10);
  }
}

TEST_CASE("linearized cone is inside the quadratic cone") {
  std::uniform_real_distribution<double> mu_dist(0.05, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double mu = mu_dist(rng);
    ContactPoint cp = make_contact_point(Vec3::Zero(), rand_unit(), mu);
    SpanCone rays = face_to_span(FaceCone{Eigen::MatrixXd(friction_face(cp))});
    for (int t = 0; t < 20; ++t) {
      Vec3 f = Vec3::Zero();
      for (int j = 0; j < rays.num_rays(); ++j) f += u(rng) * rays.V.col(j);
      const double fn = f.dot(cp.normal);
      const double ft = std::hypot(f.dot(cp.t1), f.dot(cp.t2));
      CHECK(ft <= mu * fn + 1e-10);
    }
  }
}

TEST_CASE("cwc membership is invariant to the tangent choice") {
  // the friction pyramid is preserved exactly under quarter-turn relabelings
  // of the tangent pair; for mu = 0 the cone is the normal ray and any
  // tangent choice gives the same set
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> ang(0.0, 6.28);
  for (int trial = 0; trial < 5; ++trial) {
    ContactSet a, b, c0a, c0b;
    for (int i = 0; i < 3; ++i) {
      ContactPoint cp = make_contact_point(0.1 * Vec3(g(rng), g(rng), g(rng)),
                                           rand_unit(), 0.4);
      a.contacts.push_back(cp);
      ContactPoint quarter = cp;
      quarter.t1 = cp.t2;
      quarter.t2 = cp.normal.cross(quarter.t1);
      b.contacts.push_back(quarter);

      ContactPoint f0 = cp;
      f0.mu = 0.0;
      c0a.contacts.push_back(f0);
      ContactPoint f0rot = f0;
      const double phi = ang(rng);
      f0rot.t1 = std::cos(phi) * cp.t1 + std::sin(phi) * cp.t2;
      f0rot.t2 = cp.normal.cross(f0rot.t1);
      c0b.contacts.push_back(f0rot);
    }
    Eigen::MatrixXd Ha = cwc_face(a), Hb = cwc_face(b);
    Eigen::MatrixXd H0a = cwc_face(c0a), H0b = cwc_face(c0b);
    for (int t = 0; t < 200; ++t) {
      Wrench w;
      for (int i = 0; i < 6; ++i) w.w(i) = g(rng);
      const double ma = (Ha * w.w).maxCoeff();
      const double mb = (Hb * w.w).maxCoeff();
      if (std::abs(ma) > 1e-8 && std::abs(mb) > 1e-8)
        CHECK((ma <= 0) == (mb <= 0));
      const double m0a = (H0a * w.w).maxCoeff();
      const double m0b = (H0b * w.w).maxCoeff();
      if (std::abs(m0a) > 1e-8 && std::abs(m0b) > 1e-8)
        CHECK((m0a <= 0) == (m0b <= 0));
    }
  }
}
