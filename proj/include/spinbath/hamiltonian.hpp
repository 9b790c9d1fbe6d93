#pragma once

#include "spinbath/couplings.hpp"
#include "spinbath/geometry.hpp"
#include "spinbath/pulses.hpp"
#include "spinbath/spin_ops.hpp"
#include "spinbath/types.hpp"

#include <optional>
#include <vector>

namespace spinbath {

// A bath expressed in the central spin's working frame: z along the
// quantization axis, positions relative to the central spin, coupling
// tensors rotated accordingly and hyperfine tensors resolved (file override
// where present, point dipole otherwise).
struct BathView {
  CentralSpin nv;            // original (lab frame) parameters
  Vec3 b_tesla = Vec3::Zero();      // field in the working frame
  Vec3 eps_v_per_m = Vec3::Zero();  // electric field, central principal axes
  std::vector<BathSpin> spins;      // positions in the working frame
  std::vector<Vec3> holes;
  std::vector<Mat3> hyperfine;      // resolved NV-bath tensors, rad/us
  std::vector<std::optional<Mat3>> quadrupole;
};

BathView make_view(const CentralSpin& nv, const ExternalField& field,
                   const BathRealization& bath);

// Point-dipole tensor between two view members, working frame, rad/us.
Mat3 pair_tensor(const BathView& view, int i, int j);

// Per-site operator set. For ordinary spins dim = 2s+1; for spin/hole sites
// dim = 3 with the spin-1/2 algebra acting on the first two levels and the
// third level (the hole) annihilated by every spin operator.
struct SiteOps {
  int dim = 2;
  MatrixXcd sx, sy, sz, sp, sm;
};

SiteOps site_ops_for_spin(double s);
SiteOps site_ops_three_level();

// One cluster extracted from a view, ready for Hamiltonian assembly.
struct ClusterSpec {
  std::vector<int> ids;        // indices into an external site list
  std::vector<SiteOps> ops;
  std::vector<Vec3> positions;
  std::vector<double> gamma;
  std::vector<Mat3> hyperfine;
  std::vector<std::optional<Mat3>> quadrupole;
  Vec3 b_tesla = Vec3::Zero();

  int dim() const;
  std::vector<int> dims() const;
};

// members: indices into view.spins.
ClusterSpec make_cluster_spec(const BathView& view,
                              const std::vector<int>& members);

// Central-spin Hamiltonian (3x3, rad/us): Zeeman, zero-field splitting and
// static Stark terms. Basis ordered m = +1, 0, -1.
MatrixXcd build_central(const CentralSpin& nv, const ExternalField& field);

// Bath-only terms: Zeeman, quadrupole, all intra-cluster pair couplings.
MatrixXcd build_bath(const ClusterSpec& c);

// Full central-bath interaction  sum_i S . A_i . I_i  on (3 x bath) space,
// with the central operators leftmost in the product basis.
MatrixXcd build_interaction(const ClusterSpec& c);

// Bath Hamiltonian conditioned on a central level m: transverse central
// terms dropped, S_z -> m. Returns H_bath + m * sum_i (z row of A_i) . I_i.
MatrixXcd conditioned_bath_hamiltonian(const ClusterSpec& c, double m_level);

// Conventional-CCE pair of conditioned Hamiltonians for levels (m0, m1).
struct ConditionedPair {
  MatrixXcd h0, h1;
};
ConditionedPair conditioned_pair(const ClusterSpec& c, double m0, double m1);

// Propagators U_A, U_B for a conditioned branch pair under a sequence:
// branch A starts on h0 and toggles at each (ideal) pi pulse, branch B
// starts on h1. Closed evolution.
struct BranchPropagators {
  MatrixXcd u_a, u_b;
};
BranchPropagators conditioned_propagators(const HermitianExp& e0,
                                          const HermitianExp& e1,
                                          const PulseSequence& seq,
                                          double total_time);

// Unitary for a full-Hilbert-space cluster: free segments under exp(-iHt)
// interleaved with the supplied pulse unitaries (one per pulse).
MatrixXcd sequence_propagator(const HermitianExp& h, const PulseSequence& seq,
                              double total_time,
                              const std::vector<MatrixXcd>& pulse_ops);
MatrixXcd sequence_propagator(const MatrixXcd& h, const PulseSequence& seq,
                              double total_time,
                              const std::vector<MatrixXcd>& pulse_ops);

// The two central eigenstates adiabatically connected to the tracked levels
// (by maximum overlap with the bare m states), plus pulse operators acting
// within their span. level values are m quantum numbers (+1, 0, -1).
struct CentralSubspace {
  VectorXcd u0, u1;     // eigenvectors of the 3x3 central Hamiltonian
  double f0 = 0, f1 = 0;  // their eigenvalues, rad/us
  MatrixXcd pulse(double phase_rad) const;  // pi rotation within span{u0,u1}
};

CentralSubspace central_subspace(const MatrixXcd& h_central, int level0_m,
                                 int level1_m);

}  // namespace spinbath
