#pragma once

#include "spinbath/types.hpp"

namespace spinbath {

// Dipolar kernel K_ij = (R^2 d_ij - 3 R_i R_j) / R^5 in nm^-3, R in nm.
// Symmetric and traceless. Throws NumericError below the exclusion distance.
Mat3 dipolar_kernel(const Vec3& r, double exclusion_nm = 1e-4);

// Prefactor (mu0/4pi) g1 g2 hbar in rad/us * nm^3 for gammas in rad/(s T).
double dipolar_prefactor(double gamma1, double gamma2);

// Point-dipole coupling tensor between two placed spins, rad/us.
CouplingTensor dipolar_tensor(const SpinSpecies& s1, const SpinSpecies& s2,
                              const Vec3& r1, const Vec3& r2);
CouplingTensor dipolar_tensor(double gamma1, double gamma2, const Vec3& r1,
                              const Vec3& r2);

// Secular axial coupling of a bath spin to the central spin,
//   A_par = (mu0/4pi) hbar g_i g_nv / (2 d^3) * (3 cos^2 theta - 1),
// theta measured between the central->spin vector and field_dir. rad/us.
double axial_coupling(const CentralSpin& nv, const BathSpin& spin,
                      const Vec3& field_dir);

// Flip-flop coupling between two bath spins, same functional form with the
// inter-spin vector and its angle to field_dir. rad/us.
double flipflop_coupling(const BathSpin& a, const BathSpin& b,
                         const Vec3& field_dir);

// Uniformly charged disk on the surface; field evaluated inside the
// dielectric. sigma in C/m^2, geometry in nm.
struct DiskChargeModel {
  double sigma = 0.0;
  double radius_nm = 1.0;
  Vec3 center_nm = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  double eps_d = PhysicalConstants::eps_d;
};

// Electric field at a point, V/m. On the symmetry axis the closed form
//   E = sigma / (eps0 (eps_d + 1)) (1 - z / sqrt(z^2 + a^2))
// is used; off-axis positions fall back to adaptive quadrature of the
// Coulomb integral over the disk (rel. tolerance ~1e-8).
Vec3 disk_field(const DiskChargeModel& model, const Vec3& at_nm);

// Same integral evaluated purely by quadrature (also on-axis); used to
// cross-check the closed form.
Vec3 disk_field_quadrature(const DiskChargeModel& model, const Vec3& at_nm,
                           double rel_tol = 1e-8);

// Transition parameters of the central spin under transverse splitting and
// static Stark shifts, B along the axis. Frequencies in rad/us, slopes in
// rad/us per Gauss.
struct EffectiveCentralParams {
  double e_eff = 0.0;
  double f_plus = 0.0;
  double f_minus = 0.0;
  double slope_plus = 0.0;
  double slope_minus = 0.0;
};

EffectiveCentralParams effective_params(const CentralSpin& nv,
                                        const ExternalField& field);

// Electric field components in the central spin's principal frame (x, y, z
// with z along the axis); the in-plane axes are fixed deterministically.
Vec3 field_in_central_frame(const CentralSpin& nv, const Vec3& e_lab);

// Deterministic right-handed orthonormal triad (e1, e2, axis).
void central_frame(const Vec3& axis, Vec3& e1, Vec3& e2);

}  // namespace spinbath
