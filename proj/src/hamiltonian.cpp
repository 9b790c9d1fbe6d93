#include "spinbath/hamiltonian.hpp"

#include "spinbath/errors.hpp"

#include <cmath>

namespace spinbath {

namespace {

// Rotation taking lab vectors into the working frame (rows e1, e2, axis).
Mat3 frame_rotation(const CentralSpin& nv) {
  Vec3 e1, e2;
  central_frame(nv.axis, e1, e2);
  Mat3 r;
  r.row(0) = e1.transpose();
  r.row(1) = e2.transpose();
  r.row(2) = nv.axis.normalized().transpose();
  return r;
}

}  // namespace

BathView make_view(const CentralSpin& nv, const ExternalField& field,
                   const BathRealization& bath) {
  BathView v;
  v.nv = nv;
  const Mat3 r = frame_rotation(nv);
  v.b_tesla = r * field.b_tesla();
  v.eps_v_per_m = r * field.electric_v_per_m;
  v.spins.reserve(bath.spins.size());
  v.hyperfine.reserve(bath.spins.size());
  for (const BathSpin& s : bath.spins) {
    BathSpin w = s;
    w.position = r * (s.position - nv.position);
    if (w.hyperfine_to_central)
      w.hyperfine_to_central->m =
          r * s.hyperfine_to_central->m * r.transpose();
    if (w.quadrupole) w.quadrupole->m = r * s.quadrupole->m * r.transpose();
    Mat3 a;
    if (w.hyperfine_to_central) {
      a = w.hyperfine_to_central->m;
    } else {
      a = dipolar_prefactor(nv.gamma, s.species.gamma) *
          dipolar_kernel(w.position);
    }
    v.hyperfine.push_back(a);
    v.quadrupole.push_back(w.quadrupole ? std::optional<Mat3>(w.quadrupole->m)
                                        : std::nullopt);
    v.spins.push_back(std::move(w));
  }
  v.holes.reserve(bath.holes.size());
  for (const Vec3& h : bath.holes) v.holes.push_back(r * (h - nv.position));
  return v;
}

Mat3 pair_tensor(const BathView& view, int i, int j) {
  return dipolar_prefactor(view.spins[i].species.gamma,
                           view.spins[j].species.gamma) *
         dipolar_kernel(view.spins[j].position - view.spins[i].position);
}

SiteOps site_ops_for_spin(double s) {
  const auto base = spin_operators(s);
  SiteOps ops;
  ops.dim = base.dim;
  ops.sx = base.sx;
  ops.sy = base.sy;
  ops.sz = base.sz;
  ops.sp = base.sp;
  ops.sm = base.sm;
  return ops;
}

SiteOps site_ops_three_level() {
  // levels: |+1/2>, |-1/2>, |hole>; spin ops vanish on the hole level
  const auto half = spin_operators(0.5);
  SiteOps ops;
  ops.dim = 3;
  auto lift = [](const MatrixXcd& m) {
    MatrixXcd out = MatrixXcd::Zero(3, 3);
    out.topLeftCorner(2, 2) = m;
    return out;
  };
  ops.sx = lift(half.sx);
  ops.sy = lift(half.sy);
  ops.sz = lift(half.sz);
  ops.sp = lift(half.sp);
  ops.sm = lift(half.sm);
  return ops;
}

int ClusterSpec::dim() const {
  int d = 1;
  for (const SiteOps& o : ops) d *= o.dim;
  return d;
}

std::vector<int> ClusterSpec::dims() const {
  std::vector<int> d;
  d.reserve(ops.size());
  for (const SiteOps& o : ops) d.push_back(o.dim);
  return d;
}

ClusterSpec make_cluster_spec(const BathView& view,
                              const std::vector<int>& members) {
  ClusterSpec c;
  c.b_tesla = view.b_tesla;
  for (int idx : members) {
    const BathSpin& s = view.spins.at(idx);
    c.ids.push_back(idx);
    c.ops.push_back(site_ops_for_spin(s.species.spin));
    c.positions.push_back(s.position);
    c.gamma.push_back(s.species.gamma);
    c.hyperfine.push_back(view.hyperfine.at(idx));
    c.quadrupole.push_back(view.quadrupole.at(idx));
  }
  return c;
}

MatrixXcd build_central(const CentralSpin& nv, const ExternalField& field) {
  const auto s = spin_operators(nv.spin);
  const Mat3 r = frame_rotation(nv);
  const Vec3 b = r * field.b_tesla();
  const Vec3 eps = r * field.electric_v_per_m;

  const double d_par = kTwoPi * nv.d_parallel_hz_per_v_m * 1e-6;
  const double d_perp = kTwoPi * nv.d_perp_hz_per_v_m * 1e-6;
  const double dz = nv.d_axial - d_par * eps.z();
  const double ex = nv.e_transverse - d_perp * eps.y();
  const double ey = -d_perp * eps.x();

  const MatrixXcd id = MatrixXcd::Identity(s.dim, s.dim);
  const double s2 = nv.spin * (nv.spin + 1.0);
  MatrixXcd h =
      larmor_rad_us(nv.gamma, b.x()) * s.sx +
      larmor_rad_us(nv.gamma, b.y()) * s.sy +
      larmor_rad_us(nv.gamma, b.z()) * s.sz +
      dz * (s.sz * s.sz - (s2 / 3.0) * id) +
      ex * (s.sx * s.sx - s.sy * s.sy) +
      ey * (s.sx * s.sy + s.sy * s.sx);
  return h;
}

namespace {

MatrixXcd tensor_coupling(const std::vector<int>& dims, int i, int j,
                          const SiteOps& oi, const SiteOps& oj,
                          const Mat3& t) {
  const MatrixXcd* a[3] = {&oi.sx, &oi.sy, &oi.sz};
  const MatrixXcd* b[3] = {&oj.sx, &oj.sy, &oj.sz};
  bool first = true;
  MatrixXcd sum;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) {
      if (t(p, q) == 0.0) continue;
      MatrixXcd term = t(p, q) * embed2<cxd>(*a[p], i, *b[q], j, dims);
      if (first) {
        sum = term;
        first = false;
      } else {
        sum += term;
      }
    }
  if (first) {
    int d = 1;
    for (int dd : dims) d *= dd;
    return MatrixXcd::Zero(d, d);
  }
  return sum;
}

}  // namespace

MatrixXcd build_bath(const ClusterSpec& c) {
  const std::vector<int> dims = c.dims();
  const int d = c.dim();
  MatrixXcd h = MatrixXcd::Zero(d, d);
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    const SiteOps& o = c.ops[i];
    MatrixXcd zeeman =
        larmor_rad_us(c.gamma[i], c.b_tesla.x()) * o.sx +
        larmor_rad_us(c.gamma[i], c.b_tesla.y()) * o.sy +
        larmor_rad_us(c.gamma[i], c.b_tesla.z()) * o.sz;
    h += embed<cxd>(zeeman, static_cast<int>(i), dims);
    if (c.quadrupole[i]) {
      const Mat3& q = *c.quadrupole[i];
      const MatrixXcd* v[3] = {&o.sx, &o.sy, &o.sz};
      MatrixXcd quad = MatrixXcd::Zero(o.dim, o.dim);
      for (int p = 0; p < 3; ++p)
        for (int r = 0; r < 3; ++r)
          if (q(p, r) != 0.0) quad += q(p, r) * (*v[p]) * (*v[r]);
      h += embed<cxd>(quad, static_cast<int>(i), dims);
    }
  }
  for (std::size_t i = 0; i < c.ops.size(); ++i)
    for (std::size_t j = i + 1; j < c.ops.size(); ++j) {
      const Mat3 t = dipolar_prefactor(c.gamma[i], c.gamma[j]) *
                     dipolar_kernel(c.positions[j] - c.positions[i]);
      h += tensor_coupling(dims, static_cast<int>(i), static_cast<int>(j),
                           c.ops[i], c.ops[j], t);
    }
  return h;
}

MatrixXcd build_interaction(const ClusterSpec& c) {
  // central operators leftmost: dims = [3, bath dims...]
  const auto s = spin_operators(1.0);
  std::vector<int> dims = {s.dim};
  for (int d : c.dims()) dims.push_back(d);
  int dtot = s.dim;
  for (const SiteOps& o : c.ops) dtot *= o.dim;
  MatrixXcd h = MatrixXcd::Zero(dtot, dtot);
  const MatrixXcd* sv[3] = {&s.sx, &s.sy, &s.sz};
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    const SiteOps& o = c.ops[i];
    const MatrixXcd* iv[3] = {&o.sx, &o.sy, &o.sz};
    const Mat3& a = c.hyperfine[i];
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) {
        if (a(p, q) == 0.0) continue;
        h += a(p, q) *
             embed2<cxd>(*sv[p], 0, *iv[q], static_cast<int>(i) + 1, dims);
      }
  }
  return h;
}

MatrixXcd conditioned_bath_hamiltonian(const ClusterSpec& c, double m_level) {
  const std::vector<int> dims = c.dims();
  MatrixXcd h = build_bath(c);
  if (m_level != 0.0) {
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
      const SiteOps& o = c.ops[i];
      const Mat3& a = c.hyperfine[i];
      MatrixXcd shift = a(2, 0) * o.sx + a(2, 1) * o.sy + a(2, 2) * o.sz;
      h += m_level * embed<cxd>(shift, static_cast<int>(i), dims);
    }
  }
  return h;
}

ConditionedPair conditioned_pair(const ClusterSpec& c, double m0, double m1) {
  ConditionedPair p;
  p.h0 = conditioned_bath_hamiltonian(c, m0);
  if (m1 == m0) {
    p.h1 = p.h0;
  } else {
    p.h1 = conditioned_bath_hamiltonian(c, m1);
  }
  return p;
}

BranchPropagators conditioned_propagators(const HermitianExp& e0,
                                          const HermitianExp& e1,
                                          const PulseSequence& seq,
                                          double total_time) {
  const std::vector<double> durations = seq.segment_durations(total_time);
  const int n = static_cast<int>(durations.size());
  BranchPropagators out;
  for (int k = 0; k < n; ++k) {
    const bool even = (k % 2 == 0);
    const MatrixXcd ua = (even ? e0 : e1).propagator(durations[k]);
    const MatrixXcd ub = (even ? e1 : e0).propagator(durations[k]);
    if (k == 0) {
      out.u_a = ua;
      out.u_b = ub;
    } else {
      out.u_a = ua * out.u_a;
      out.u_b = ub * out.u_b;
    }
  }
  return out;
}

MatrixXcd sequence_propagator(const HermitianExp& h, const PulseSequence& seq,
                              double total_time,
                              const std::vector<MatrixXcd>& pulse_ops) {
  const std::vector<double> durations = seq.segment_durations(total_time);
  if (pulse_ops.size() + 1 != durations.size())
    throw ConfigError("sequence_propagator: pulse count mismatch");
  MatrixXcd u = h.propagator(durations[0]);
  for (std::size_t k = 0; k < pulse_ops.size(); ++k)
    u = h.propagator(durations[k + 1]) * (pulse_ops[k] * u).eval();
  return u;
}

MatrixXcd sequence_propagator(const MatrixXcd& h, const PulseSequence& seq,
                              double total_time,
                              const std::vector<MatrixXcd>& pulse_ops) {
  return sequence_propagator(HermitianExp(h), seq, total_time, pulse_ops);
}

CentralSubspace central_subspace(const MatrixXcd& h_central, int level0_m,
                                 int level1_m) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(h_central);
  if (solver.info() != Eigen::Success)
    throw NumericError("central_subspace: diagonalization failed");
  // basis index of m: +1 -> 0, 0 -> 1, -1 -> 2
  auto basis_index = [](int m) {
    if (m == 1) return 0;
    if (m == 0) return 1;
    if (m == -1) return 2;
    throw ConfigError("central level must be one of -1, 0, +1");
  };
  const int b0 = basis_index(level0_m);
  const int b1 = basis_index(level1_m);
  int i0 = 0, i1 = 0;
  double best0 = -1, best1 = -1;
  for (int k = 0; k < 3; ++k) {
    const double w0 = std::norm(solver.eigenvectors()(b0, k));
    const double w1 = std::norm(solver.eigenvectors()(b1, k));
    if (w0 > best0) {
      best0 = w0;
      i0 = k;
    }
    if (w1 > best1) {
      best1 = w1;
      i1 = k;
    }
  }
  if (i0 == i1)
    throw NumericError("central_subspace: tracked levels are degenerate");
  CentralSubspace s;
  s.u0 = solver.eigenvectors().col(i0);
  s.u1 = solver.eigenvectors().col(i1);
  s.f0 = solver.eigenvalues()(i0);
  s.f1 = solver.eigenvalues()(i1);
  // fix the gauge so overlaps with the bare levels are real positive
  const cxd g0 = s.u0(b0) / std::abs(s.u0(b0));
  const cxd g1 = s.u1(b1) / std::abs(s.u1(b1));
  s.u0 /= g0;
  s.u1 /= g1;
  return s;
}

MatrixXcd CentralSubspace::pulse(double phase_rad) const {
  // exp(-i pi/2 (cos phi sx + sin phi sy)) on span{u0, u1}, identity outside
  const int d = static_cast<int>(u0.size());
  MatrixXcd p = MatrixXcd::Identity(d, d);
  const cxd e_minus = std::exp(cxd(0.0, -phase_rad));
  const cxd e_plus = std::exp(cxd(0.0, phase_rad));
  const MatrixXcd p00 = u0 * u0.adjoint();
  const MatrixXcd p11 = u1 * u1.adjoint();
  p -= p00 + p11;
  p += cxd(0, -1) * (e_minus * (u0 * u1.adjoint()) + e_plus * (u1 * u0.adjoint()));
  return p;
}

}  // namespace spinbath
