#pragma once

#include "spinbath/cce.hpp"
#include "spinbath/hamiltonian.hpp"

#include <array>
#include <optional>
#include <vector>

namespace spinbath {

enum class ChannelKind {
  central_dephase,
  spin_raise,
  spin_lower,
  pair_exchange_up,
  pair_exchange_down,
  hop,
};

std::string to_string(ChannelKind k);

// One incoherent process. Targets are site indices; hop channels carry the
// spin projection being moved (+1 or -1 in units of 1/2 pairs).
struct LindbladChannel {
  ChannelKind kind = ChannelKind::spin_lower;
  std::array<int, 2> targets = {-1, -1};
  int hop_spin = +1;
  double rate_us = 0.0;  // 1/us
};

// Incoherent hopping of surface spins into vacant sites.
// Rate Gamma_ij = pref * exp(-r_ij / r_hop); the prefactor is 1/t_hop by
// default, with the 1/(2 pi t_hop) variant behind a switch.
struct HoppingModel {
  double t_hop_us = 0.01;  // 10 ns
  double r_hop_nm = 5.0;
  bool two_pi_prefactor = false;
  double cutoff_factor = 3.0;  // channels kept within cutoff_factor * r_hop
};

double hop_rate(double r_nm, const HoppingModel& model);

struct GibbsInit {
  double temperature_k = 0.0;  // 0 disables
};

// Diagonal Boltzmann single-spin density matrix at temperature T for a spin
// in field B_z (Tesla); E_m = hbar gamma B m.
MatrixXcd gibbs_state(const SpinSpecies& species, double temperature_k,
                      double b_tesla_z);

// Dissipation configuration for the master-equation engines.
struct ChannelConfig {
  double t1_us = 0.0;          // surface-spin relaxation time; 0 = off
  double gamma_nv_us = 0.0;    // central dephasing rate (default 0)
  double exchange_rate_us = 0.0;  // uniform incoherent pair exchange; 0 = off
  double exchange_radius_nm = 0.0; // pairs within this radius (0 = r_connect)
  bool hopping = false;
  HoppingModel hop;
};

// One site of a dissipative bath in the working frame. Hopping baths carry
// three-level sites (spin-1/2 pair plus a hole level).
struct MeSite {
  Vec3 position = Vec3::Zero();
  double gamma = 0.0;
  SiteOps ops;
  Mat3 hyperfine = Mat3::Zero();
  std::optional<Mat3> quadrupole;
  Eigen::VectorXd init_pops;
  bool electron = false;
  bool starts_as_hole = false;
};

struct MeSystem {
  std::vector<MeSite> sites;
  Vec3 b_tesla = Vec3::Zero();
  std::vector<LindbladChannel> channels;
};

// Assemble the dissipative bath: ordinary spins with relaxation/exchange
// channels, or the spin/hole three-level mapping when hopping is enabled.
MeSystem make_me_system(const BathView& view, const ChannelConfig& cfg,
                        const CceOptions& opt);

// Channel list for a bath (diagnostics and tests).
std::vector<LindbladChannel> build_channels(const MeSystem& system,
                                            const ChannelConfig& cfg);

// exp(G tau) for a fixed (generally non-Hermitian) generator; decides between
// an eigendecomposition cache and Pade per call.
class SuperExp {
 public:
  explicit SuperExp(MatrixXcd g);
  MatrixXcd at(double tau) const;

 private:
  MatrixXcd g_;
  bool use_eig_ = false;
  MatrixXcd v_, v_inv_;
  VectorXcd lambda_;
};

// Full-mode Lindblad trajectory rho(t_k) under a pulse sequence: for each
// requested time the sequence spans [0, t] with its pulses applied as the
// supplied unitaries. Checks trace preservation to trace_tol.
std::vector<MatrixXcd> lindblad_propagate(
    const MatrixXcd& h, const std::vector<std::pair<MatrixXcd, double>>& jumps,
    const MatrixXcd& rho0, const PulseSequence& seq,
    const std::vector<MatrixXcd>& pulse_ops, const std::vector<double>& times_us,
    double trace_tol = 1e-6);

// Conditioned master-equation CCE: per cluster the projected block evolves
// under the two branch Hamiltonians with bath-only jump operators.
CoherenceCurve mecce_coherence(const BathRealization& bath,
                               const CentralSpin& nv,
                               const ExternalField& field,
                               const PulseSequence& seq, const CceOptions& opt,
                               const ChannelConfig& channels);

// Master-equation gCCE: full central Hilbert space retained per cluster.
CoherenceCurve megcce_coherence(const BathRealization& bath,
                                const CentralSpin& nv,
                                const ExternalField& field,
                                const PulseSequence& seq, const CceOptions& opt,
                                const ChannelConfig& channels);

}  // namespace spinbath
