#pragma once

#include "spinbath/linalg.hpp"
#include "spinbath/species.hpp"
#include "spinbath/units.hpp"

#include <optional>
#include <vector>

namespace spinbath {

// 3x3 real coupling tensor in rad/us. Symmetric; traceless when pure dipolar.
struct CouplingTensor {
  Mat3 m = Mat3::Zero();

  bool is_symmetric(double rel_tol = 1e-10) const;
  bool is_traceless(double rel_tol = 1e-9) const;
};

// The sensed spin-1 defect. Position in nm, quantization axis a unit vector.
// D/E in rad/us; Stark susceptibilities in Hz per (V/m).
struct CentralSpin {
  Vec3 position = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();
  double spin = 1.0;
  double d_axial = mhz_to_rad_us(2870.0);
  double e_transverse = 0.0;
  double d_parallel_hz_per_v_m = 3.5e-3;  // = 0.00035 kHz/(V/cm)
  double d_perp_hz_per_v_m = 0.17;        // = 0.017 kHz/(V/cm)
  double gamma = PhysicalConstants::gamma_e;
};

inline CentralSpin make_nv(const Vec3& position, const Vec3& axis) {
  CentralSpin nv;
  nv.position = position;
  nv.axis = axis.normalized();
  return nv;
}

// One placed bath spin. Tensors, when present, override the point-dipole
// values computed from geometry (the ingestion path for ab initio data).
struct BathSpin {
  int id = 0;
  SpinSpecies species;
  Vec3 position = Vec3::Zero();  // nm
  std::optional<CouplingTensor> hyperfine_to_central;
  std::optional<CouplingTensor> quadrupole;
};

// Static external fields. B in Gauss; electric field at the central spin in
// V/m (lab frame).
struct ExternalField {
  Vec3 b_gauss = Vec3(0, 0, 400.0);
  Vec3 electric_v_per_m = Vec3::Zero();

  Vec3 b_tesla() const { return b_gauss * 1e-4; }
};

inline ExternalField field_along(const Vec3& axis, double b_gauss = 400.0) {
  ExternalField f;
  f.b_gauss = axis.normalized() * b_gauss;
  return f;
}

}  // namespace spinbath
