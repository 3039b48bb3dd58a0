#include "trayplan/moments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "trayplan/solvers/qp.hpp"

namespace trayplan {

MonomialBasis::MonomialBasis(int d) : d_(d) {
  if (d < 0) throw std::invalid_argument("MonomialBasis: negative degree");
  for (int t = 0; t <= d; ++t)
    for (int a1 = t; a1 >= 0; --a1)
      for (int a2 = t - a1; a2 >= 0; --a2)
        exps_.push_back({a1, a2, t - a1 - a2});
  for (int i = 0; i < size(); ++i) lookup_[exps_[i]] = i;
}

int MonomialBasis::index(const std::array<int, 3>& a) const {
  auto it = lookup_.find(a);
  return it == lookup_.end() ? -1 : it->second;
}

Eigen::VectorXd MonomialBasis::eval(const Vec3& r) const {
  Eigen::VectorXd b(size());
  for (int i = 0; i < size(); ++i) {
    const auto& a = exps_[i];
    b(i) = std::pow(r.x(), a[0]) * std::pow(r.y(), a[1]) * std::pow(r.z(), a[2]);
  }
  return b;
}

TruncatedMomentSequence tms_from_point_masses(const std::vector<PointMass>& points,
                                              int deg) {
  MonomialBasis basis(deg);
  TruncatedMomentSequence tms;
  tms.deg = deg;
  tms.y = Eigen::VectorXd::Zero(basis.size());
  for (const PointMass& pm : points) tms.y += pm.mass * basis.eval(pm.position);
  return tms;
}

namespace {

int degree_of(const Eigen::VectorXd& coeffs) {
  for (int d = 0; d <= 8; ++d)
    if (coeffs.size() == MonomialBasis::size_of(d)) return d;
  throw std::invalid_argument("polynomial coefficient vector has invalid length");
}

}  // namespace

BoundingShape BoundingShape::from_halfspaces(const Eigen::MatrixXd& A,
                                             const Eigen::VectorXd& b) {
  BoundingShape shape;
  for (int j = 0; j < A.rows(); ++j) {
    Eigen::VectorXd p(4);
    p << b(j), -A(j, 0), -A(j, 1), -A(j, 2);
    shape.polys.push_back(p);
  }
  return shape;
}

BoundingShape BoundingShape::box(const Vec3& lo, const Vec3& hi) {
  Eigen::MatrixXd A(6, 3);
  A << Eigen::Matrix3d::Identity(), -Eigen::Matrix3d::Identity();
  Eigen::VectorXd b(6);
  b << hi, -lo;
  return from_halfspaces(A, b);
}

bool BoundingShape::contains(const Vec3& r, double tol) const {
  for (const Eigen::VectorXd& p : polys) {
    MonomialBasis basis(degree_of(p));
    if (p.dot(basis.eval(r)) < -tol) return false;
  }
  return true;
}

namespace {

// halfspace rows (a, b) with a.r <= b extracted from the degree-1 polynomials
std::pair<Eigen::MatrixXd, Eigen::VectorXd> linear_rows(const BoundingShape& s) {
  std::vector<int> lin;
  for (size_t j = 0; j < s.polys.size(); ++j)
    if (degree_of(s.polys[j]) == 1) lin.push_back(static_cast<int>(j));
  Eigen::MatrixXd A(lin.size(), 3);
  Eigen::VectorXd b(lin.size());
  for (size_t i = 0; i < lin.size(); ++i) {
    const Eigen::VectorXd& p = s.polys[lin[i]];
    A.row(i) = -p.tail<3>().transpose();
    b(i) = p(0);
  }
  return {A, b};
}

// support function max d.r over the degree-1 halfspaces; throws if unbounded
double support(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Vec3& d) {
  solvers::LinearProgram lp;
  lp.c = -d;
  lp.Ain = A;
  lp.bin = b;
  solvers::LpSolution sol = solvers::solve_lp(lp);
  if (sol.status != solvers::SolveStatus::Optimal)
    throw std::invalid_argument("BoundingShape: polyhedron is not bounded");
  return -sol.obj;
}

}  // namespace

void BoundingShape::validate(const Vec3& witness) const {
  if (polys.empty()) throw std::invalid_argument("BoundingShape: empty");
  if (!contains(witness, 1e-9))
    throw std::invalid_argument("BoundingShape: witness point is outside");
  auto [A, b] = linear_rows(*this);
  if (A.rows() == static_cast<long>(polys.size()))
    for (int i = 0; i < 6; ++i) {
      Vec3 d = Vec3::Zero();
      d(i / 2) = (i % 2 == 0) ? 1.0 : -1.0;
      support(A, b, d);  // throws if unbounded
    }
}

double BoundingShape::bounding_radius() const {
  auto [A, b] = linear_rows(*this);
  double r2 = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    const double hi = support(A, b, Vec3::Unit(axis));
    const double lo = -support(A, b, -Vec3::Unit(axis));
    const double m = std::max(std::abs(hi), std::abs(lo));
    r2 += m * m;
  }
  return std::sqrt(r2);
}

double riesz(const Eigen::VectorXd& f, const TruncatedMomentSequence& z) {
  if (degree_of(f) > z.deg) throw std::invalid_argument("riesz: degree overflow");
  return f.dot(z.y.head(f.size()));
}

Eigen::MatrixXd moment_matrix(const TruncatedMomentSequence& y, int d) {
  Eigen::VectorXd one(1);
  one << 1.0;
  return localizing_matrix(one, y, d);
}

Eigen::MatrixXd localizing_matrix(const Eigen::VectorXd& p,
                                  const TruncatedMomentSequence& y, int d) {
  const int pdeg = degree_of(p);
  if (2 * d + pdeg > y.deg)
    throw std::invalid_argument("localizing_matrix: moments do not cover degree");
  MonomialBasis row_basis(d), p_basis(pdeg), full(y.deg);
  const int s = row_basis.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(s, s);
  for (int a = 0; a < s; ++a)
    for (int b = a; b < s; ++b) {
      double v = 0.0;
      for (int g = 0; g < p_basis.size(); ++g) {
        if (p(g) == 0.0) continue;
        std::array<int, 3> e;
        for (int k = 0; k < 3; ++k)
          e[k] = row_basis.exponents()[a][k] + row_basis.exponents()[b][k] +
                 p_basis.exponents()[g][k];
        v += p(g) * y.y(full.index(e));
      }
      M(a, b) = M(b, a) = v;
    }
  return M;
}

TruncatedMomentSequence params_to_tms(const InertialParams& params) {
  const Mat3 I = params.inertia();
  const Mat3 S = 0.5 * I.trace() * Mat3::Identity() - I;
  TruncatedMomentSequence tms;
  tms.deg = 2;
  tms.y.resize(10);
  tms.y(0) = params.mass();
  tms.y.segment<3>(1) = params.mass_times_com();
  tms.y(4) = S(0, 0);
  tms.y(5) = S(0, 1);
  tms.y(6) = S(0, 2);
  tms.y(7) = S(1, 1);
  tms.y(8) = S(1, 2);
  tms.y(9) = S(2, 2);
  return tms;
}

InertialParams tms_to_params(const TruncatedMomentSequence& y) {
  if (y.deg < 2 || y.y.size() < 10)
    throw std::invalid_argument("tms_to_params: need degree-2 moments");
  Mat3 S;
  S << y.y(4), y.y(5), y.y(6),
       y.y(5), y.y(7), y.y(8),
       y.y(6), y.y(8), y.y(9);
  const Mat3 I = S.trace() * Mat3::Identity() - S;
  InertialParams p;
  p.theta(0) = y.y(0);
  p.theta.segment<3>(1) = y.y.segment<3>(1);
  p.theta(4) = I(0, 0);
  p.theta(5) = I(0, 1);
  p.theta(6) = I(0, 2);
  p.theta(7) = I(1, 1);
  p.theta(8) = I(1, 2);
  p.theta(9) = I(2, 2);
  return p;
}

namespace {

// Affine PSD block M_d(p y~) where moments with basis index < n_fixed take
// the given fixed values and the rest are variables var_offset + (idx -
// n_fixed).
solvers::PsdBlock moment_block(const MonomialBasis& full,
                               const Eigen::VectorXd& p, int block_d,
                               int n_fixed, const Eigen::VectorXd& fixed_vals,
                               int var_offset) {
  MonomialBasis row_basis(block_d), p_basis(degree_of(p));
  const int s = row_basis.size();
  solvers::PsdBlock block;
  block.F0 = Eigen::MatrixXd::Zero(s, s);
  std::map<int, Eigen::MatrixXd> terms;
  for (int a = 0; a < s; ++a)
    for (int b = a; b < s; ++b)
      for (int g = 0; g < p_basis.size(); ++g) {
        if (p(g) == 0.0) continue;
        std::array<int, 3> e;
        for (int k = 0; k < 3; ++k)
          e[k] = row_basis.exponents()[a][k] + row_basis.exponents()[b][k] +
                 p_basis.exponents()[g][k];
        const int idx = full.index(e);
        if (idx < n_fixed) {
          block.F0(a, b) += p(g) * fixed_vals(idx);
          if (a != b) block.F0(b, a) += p(g) * fixed_vals(idx);
        } else {
          auto it = terms.try_emplace(var_offset + idx - n_fixed,
                                      Eigen::MatrixXd::Zero(s, s)).first;
          it->second(a, b) += p(g);
          if (a != b) it->second(b, a) += p(g);
        }
      }
  for (auto& [vi, Fi] : terms) block.terms.emplace_back(vi, std::move(Fi));
  return block;
}

Eigen::VectorXd poly_one() {
  Eigen::VectorXd one(1);
  one << 1.0;
  return one;
}

int v_of(const Eigen::VectorXd& p) { return (degree_of(p) + 1) / 2; }

}  // namespace

solvers::SdpProblem realizability_conditions(const TruncatedMomentSequence& y,
                                             const BoundingShape& shape, int r) {
  if (r < 1) throw std::invalid_argument("realizability_conditions: r >= 1");
  if (y.deg < 2) throw std::invalid_argument("realizability_conditions: deg 2 TMS");
  MonomialBasis full(2 * r);
  const int n_fixed = std::min<int>(10, full.size());
  Eigen::VectorXd fixed = y.y.head(n_fixed);
  solvers::SdpProblem prob;
  prob.num_vars = std::max(1, full.size() - n_fixed);
  prob.psd_blocks.push_back(moment_block(full, poly_one(), r, n_fixed, fixed, 0));
  for (const Eigen::VectorXd& p : shape.polys) {
    const int d = r - v_of(p);
    if (d < 0) continue;
    prob.psd_blocks.push_back(moment_block(full, p, d, n_fixed, fixed, 0));
  }
  if (full.size() == n_fixed) {
    // r = 1: no extension variables; box the dummy variable so the cone
    // program stays well posed
    prob.Gl = Eigen::MatrixXd(2, 1);
    prob.Gl << 1, -1;
    prob.hl = Eigen::VectorXd::Ones(2);
  }
  return prob;
}

ViolationBound max_violation_sdp(const Vec6& h,
                                 const Eigen::Matrix<double, 6, 10>& Y,
                                 const BoundingShape& shape,
                                 const ComBox& com_set, int r,
                                 const solvers::ConeLpSettings& settings) {
  if (r < 1) throw std::invalid_argument("max_violation_sdp: r >= 1");
  MonomialBasis full(2 * r);
  const int n_mom = full.size() - 1;  // y0 = m = 1 is fixed
  const int n_v = static_cast<int>(com_set.vertices.size());
  Eigen::VectorXd fixed(1);
  fixed << 1.0;

  solvers::SdpProblem prob;
  prob.num_vars = n_mom + n_v;
  prob.psd_blocks.push_back(moment_block(full, poly_one(), r, 1, fixed, 0));
  for (const Eigen::VectorXd& p : shape.polys) {
    const int d = r - v_of(p);
    if (d < 0) continue;
    prob.psd_blocks.push_back(moment_block(full, p, d, 1, fixed, 0));
  }
  // redundant ball localizer |r|^2 <= R^2: keeps every extension moment
  // bounded so the relaxation cannot have an improving ray
  {
    const double R = shape.bounding_radius();
    Eigen::VectorXd ball = Eigen::VectorXd::Zero(10);
    ball(0) = R * R;
    ball(4) = ball(7) = ball(9) = -1.0;
    prob.psd_blocks.push_back(moment_block(full, ball, r - 1, 1, fixed, 0));
  }

  // c = degree-1 moments must be a convex combination of the CoM vertices
  prob.Aeq = Eigen::MatrixXd::Zero(4, prob.num_vars);
  prob.beq = Eigen::VectorXd::Zero(4);
  for (int i = 0; i < 3; ++i) {
    prob.Aeq(i, i) = 1.0;  // moment var for r_i (basis index 1 + i)
    for (int k = 0; k < n_v; ++k) prob.Aeq(i, n_mom + k) = -com_set.vertices[k](i);
  }
  for (int k = 0; k < n_v; ++k) prob.Aeq(3, n_mom + k) = 1.0;
  prob.beq(3) = 1.0;
  prob.Gl = Eigen::MatrixXd::Zero(n_v, prob.num_vars);
  prob.Gl.rightCols(n_v) = -Eigen::MatrixXd::Identity(n_v, n_v);
  prob.hl = Eigen::VectorXd::Zero(n_v);

  // objective: maximize h' Y theta with theta = [1, c, vech(I)],
  // I = tr(S) 1 - S, S the degree-2 moment block
  const Vec10 q = Y.transpose() * h;
  prob.c = Eigen::VectorXd::Zero(prob.num_vars);
  prob.c.segment<3>(0) = q.segment<3>(1);
  // degree-2 moment variables (basis indices 4..9 shifted by the fixed y0)
  prob.c(3) = q(7) + q(9);   // y200 -> Iyy, Izz
  prob.c(4) = -q(5);         // y110 -> -Ixy
  prob.c(5) = -q(6);         // y101 -> -Ixz
  prob.c(6) = q(4) + q(9);   // y020 -> Ixx, Izz
  prob.c(7) = -q(8);         // y011 -> -Iyz
  prob.c(8) = q(4) + q(7);   // y002 -> Ixx, Iyy
  prob.c = -prob.c;          // solve_sdp minimizes

  solvers::SdpSolution sol = solve_sdp(prob, settings);
  if (sol.status == solvers::SolveStatus::DualInfeasible)
    throw std::logic_error("max_violation_sdp: unbounded relaxation (shape not compact?)");
  if (sol.status != solvers::SolveStatus::Optimal)
    throw std::runtime_error("max_violation_sdp: solver failed");

  ViolationBound out;
  out.value = q(0) - sol.obj;
  TruncatedMomentSequence tms;
  tms.deg = 2;
  tms.y.resize(10);
  tms.y(0) = 1.0;
  tms.y.tail(9) = sol.x.head(9);
  out.theta = tms_to_params(tms);
  return out;
}

VerifyReport verify_instants(const std::vector<double>& times,
                             const std::vector<SpatialVelocity>& xis,
                             const std::vector<SpatialAccelGrav>& etas,
                             const Eigen::MatrixXd& H,
                             const BoundingShape& shape, const ComBox& com_set,
                             int r, int num_threads) {
  if (times.size() != xis.size() || times.size() != etas.size())
    throw std::invalid_argument("verify_instants: length mismatch");
  const int nt = static_cast<int>(times.size());
  const int nh = static_cast<int>(H.rows());
  const auto start = std::chrono::steady_clock::now();

  VerifyReport report;
  report.times = times;
  report.entries.resize(static_cast<size_t>(nt) * nh);
  std::mutex fail_mutex;

  std::vector<Eigen::Matrix<double, 6, 10>> regs(nt);
  for (int i = 0; i < nt; ++i) regs[i] = regressor(xis[i], etas[i]);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int task = next.fetch_add(1); task < nt * nh; task = next.fetch_add(1)) {
      const int ti = task / nh;
      const int row = task % nh;
      VerifyReport::Entry& e = report.entries[task];
      e.t = times[ti];
      e.row = row;
      try {
        e.bound = max_violation_sdp(H.row(row).transpose(), regs[ti], shape,
                                    com_set, r).value;
      } catch (const std::exception&) {
        e.bound = std::numeric_limits<double>::quiet_NaN();
        std::lock_guard<std::mutex> lock(fail_mutex);
        report.failures.emplace_back(times[ti], row);
      }
    }
  };
  int nw = num_threads > 0 ? num_threads
                           : static_cast<int>(std::thread::hardware_concurrency());
  nw = std::max(1, std::min(nw, nt * nh));
  std::vector<std::thread> pool;
  for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  report.per_time_max.assign(nt, -std::numeric_limits<double>::infinity());
  report.max_bound = -std::numeric_limits<double>::infinity();
  for (int ti = 0; ti < nt; ++ti)
    for (int row = 0; row < nh; ++row) {
      const double b = report.entries[static_cast<size_t>(ti) * nh + row].bound;
      if (std::isnan(b)) continue;
      report.per_time_max[ti] = std::max(report.per_time_max[ti], b);
      report.max_bound = std::max(report.max_bound, b);
    }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

void write_verify_csv(const VerifyReport& report, const std::string& path) {
  std::ofstream f(path);
  f.precision(12);
  f << "t,row,bound\n";
  for (const auto& e : report.entries)
    f << e.t << "," << e.row << "," << e.bound << "\n";
  f << "# max_bound," << report.max_bound << ",wall_seconds,"
    << report.wall_seconds << ",failures," << report.failures.size() << "\n";
}

}  // namespace trayplan
