#include "spinbath/geometry.hpp"

#include "spinbath/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace spinbath {

Orientation orientation_from_string(const std::string& s) {
  if (s == "100" || s == "(100)") return Orientation::o100;
  if (s == "110" || s == "(110)") return Orientation::o110;
  if (s == "111" || s == "(111)") return Orientation::o111;
  if (s == "113" || s == "(113)") return Orientation::o113;
  throw ConfigError("unknown surface orientation '" + s + "'");
}

Termination termination_from_string(const std::string& s) {
  if (s == "bare") return Termination::bare;
  if (s == "H") return Termination::hydrogen;
  if (s == "F") return Termination::fluorine;
  if (s == "O") return Termination::oxygen;
  if (s == "N") return Termination::nitrogen;
  throw ConfigError("unknown termination '" + s + "' (bare|H|F|O|N)");
}

std::string to_string(Orientation o) {
  switch (o) {
    case Orientation::o100: return "100";
    case Orientation::o110: return "110";
    case Orientation::o111: return "111";
    case Orientation::o113: return "113";
  }
  return "?";
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::bare: return "bare";
    case Termination::hydrogen: return "H";
    case Termination::fluorine: return "F";
    case Termination::oxygen: return "O";
    case Termination::nitrogen: return "N";
  }
  return "?";
}

double facet_axis_tilt_deg(Orientation o) {
  // Angle between <111> and the surface normal.
  switch (o) {
    case Orientation::o100: return 54.7356103172;
    case Orientation::o110: return 35.2643896828;
    case Orientation::o111: return 0.0;
    case Orientation::o113: return 29.4962084966;
  }
  return 0.0;
}

namespace {

const SpinSpecies& termination_species(Termination t) {
  switch (t) {
    case Termination::hydrogen: return species_by_name("1H");
    case Termination::fluorine: return species_by_name("19F");
    case Termination::oxygen: return species_by_name("17O");
    case Termination::nitrogen: return species_by_name("14N");
    default: throw ConfigError("bare termination carries no nuclei");
  }
}

}  // namespace

std::size_t count_lattice_sites(const BulkRegion& region) {
  std::size_t n = 0;
  const double a = kDiamondLatticeConstantNm;
  const double r = region.radius_nm;
  // 8-atom conventional cell: fcc + basis shift (1/4,1/4,1/4).
  static const double basis[8][3] = {
      {0, 0, 0},          {0, 0.5, 0.5},       {0.5, 0, 0.5},
      {0.5, 0.5, 0},      {0.25, 0.25, 0.25},  {0.25, 0.75, 0.75},
      {0.75, 0.25, 0.75}, {0.75, 0.75, 0.25}};
  const int lo_x = static_cast<int>(std::floor((region.center.x() - r) / a)) - 1;
  const int hi_x = static_cast<int>(std::ceil((region.center.x() + r) / a)) + 1;
  const int lo_y = static_cast<int>(std::floor((region.center.y() - r) / a)) - 1;
  const int hi_y = static_cast<int>(std::ceil((region.center.y() + r) / a)) + 1;
  const int lo_z = static_cast<int>(std::floor((region.center.z() - r) / a)) - 1;
  const int hi_z = static_cast<int>(std::ceil((region.center.z() + r) / a)) + 1;
  const double r2 = r * r;
  for (int ix = lo_x; ix <= hi_x; ++ix)
    for (int iy = lo_y; iy <= hi_y; ++iy)
      for (int iz = lo_z; iz <= hi_z; ++iz)
        for (const auto& b : basis) {
          const Vec3 p(a * (ix + b[0]), a * (iy + b[1]), a * (iz + b[2]));
          if ((p - region.center).squaredNorm() > r2) continue;
          if (region.truncate_at_surface && p.z() >= 0.0) continue;
          ++n;
        }
  return n;
}

BathRealization sample_bulk_c13(const BulkRegion& region, double abundance,
                                std::uint64_t seed) {
  if (abundance < 0.0 || abundance > 1.0)
    throw ConfigError("abundance must lie in [0, 1]");
  BathRealization bath;
  bath.seed = seed;
  {
    std::ostringstream prov;
    prov << "bulk_c13 r=" << region.radius_nm
         << " trunc=" << region.truncate_at_surface << " p=" << abundance;
    bath.provenance = prov.str();
  }
  if (abundance == 0.0 || region.radius_nm <= 0.0) return bath;

  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const SpinSpecies& c13 = species_by_name("13C");

  const double a = kDiamondLatticeConstantNm;
  const double r = region.radius_nm;
  static const double basis[8][3] = {
      {0, 0, 0},          {0, 0.5, 0.5},       {0.5, 0, 0.5},
      {0.5, 0.5, 0},      {0.25, 0.25, 0.25},  {0.25, 0.75, 0.75},
      {0.75, 0.25, 0.75}, {0.75, 0.75, 0.25}};
  const int lo_x = static_cast<int>(std::floor((region.center.x() - r) / a)) - 1;
  const int hi_x = static_cast<int>(std::ceil((region.center.x() + r) / a)) + 1;
  const int lo_y = static_cast<int>(std::floor((region.center.y() - r) / a)) - 1;
  const int hi_y = static_cast<int>(std::ceil((region.center.y() + r) / a)) + 1;
  const int lo_z = static_cast<int>(std::floor((region.center.z() - r) / a)) - 1;
  const int hi_z = static_cast<int>(std::ceil((region.center.z() + r) / a)) + 1;
  const double r2 = r * r;
  int id = 0;
  for (int ix = lo_x; ix <= hi_x; ++ix)
    for (int iy = lo_y; iy <= hi_y; ++iy)
      for (int iz = lo_z; iz <= hi_z; ++iz)
        for (const auto& b : basis) {
          const Vec3 p(a * (ix + b[0]), a * (iy + b[1]), a * (iz + b[2]));
          if ((p - region.center).squaredNorm() > r2) continue;
          if (region.truncate_at_surface && p.z() >= 0.0) continue;
          if (u(rng) >= abundance) continue;
          // avoid placing a bath nucleus on top of the central spin
          if ((p - region.center).norm() < 0.15) continue;
          BathSpin s;
          s.id = id++;
          s.species = c13;
          s.position = p;
          bath.spins.push_back(std::move(s));
        }
  return bath;
}

namespace {

// 2D lattice description: primitive vectors plus per-cell basis offsets.
struct Lattice2D {
  Vec3 u, v;
  std::vector<Vec3> basis;
};

Lattice2D facet_lattice(Orientation o) {
  const double a = kDiamondLatticeConstantNm;
  const double s = a / std::sqrt(2.0);  // ideal 1x1 surface site spacing
  Lattice2D l;
  switch (o) {
    case Orientation::o100:
      // square lattice, spacing a/sqrt(2)
      l.u = Vec3(s, 0, 0);
      l.v = Vec3(0, s, 0);
      l.basis = {Vec3::Zero()};
      break;
    case Orientation::o111:
      // triangular lattice, nearest-neighbor spacing a/sqrt(2)
      l.u = Vec3(s, 0, 0);
      l.v = Vec3(0.5 * s, 0.5 * std::sqrt(3.0) * s, 0);
      l.basis = {Vec3::Zero()};
      break;
    case Orientation::o110:
      // brick-wall: rows at a/2, in-row spacing a/sqrt(2), alternate rows
      // offset by half a period (two sites per a/sqrt(2) x a cell)
      l.u = Vec3(s, 0, 0);
      l.v = Vec3(0, a, 0);
      l.basis = {Vec3::Zero(), Vec3(0.5 * s, 0.5 * a, 0)};
      break;
    case Orientation::o113:
      // oblique cell of the ideal (113) plane: |u| = a/sqrt(2),
      // |v| = a sqrt(6)/2, cos(angle) = -1/sqrt(12); the 1x1 cut exposes
      // one atom of each sublattice, offset in-plane by u/11 + 2v/11
      {
        const double lv = a * std::sqrt(6.0) / 2.0;
        const double cosg = -1.0 / std::sqrt(12.0);
        const double sing = std::sqrt(1.0 - cosg * cosg);
        l.u = Vec3(s, 0, 0);
        l.v = Vec3(lv * cosg, lv * sing, 0);
        l.basis = {Vec3::Zero(), (1.0 / 11.0) * l.u + (2.0 / 11.0) * l.v};
      }
      break;
  }
  return l;
}

}  // namespace

BathRealization generate_surface_lattice(Orientation orientation,
                                         Termination termination,
                                         double lateral_radius_nm,
                                         std::uint64_t seed) {
  BathRealization bath;
  bath.seed = seed;
  bath.provenance = "surface_lattice " + to_string(orientation) + "+" +
                    to_string(termination);
  if (termination == Termination::bare) return bath;

  const SpinSpecies& sp = termination_species(termination);
  const Lattice2D lat = facet_lattice(orientation);
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  // enumerate cells covering the disk of radius lateral_radius_nm
  const double r = lateral_radius_nm;
  const double det = std::abs(lat.u.x() * lat.v.y() - lat.u.y() * lat.v.x());
  const int n_max = static_cast<int>(std::ceil(
                        r * (lat.u.norm() + lat.v.norm()) / det)) + 2;
  int id = 0;
  for (int i = -n_max; i <= n_max; ++i)
    for (int j = -n_max; j <= n_max; ++j)
      for (const Vec3& b : lat.basis) {
        const Vec3 p = double(i) * lat.u + double(j) * lat.v + b;
        if (p.squaredNorm() > r * r) continue;
        if (sp.natural_abundance < 1.0 && u01(rng) >= sp.natural_abundance)
          continue;
        BathSpin s;
        s.id = id++;
        s.species = sp;
        s.position = Vec3(p.x(), p.y(), 0.0);
        bath.spins.push_back(std::move(s));
      }
  return bath;
}

BathRealization sample_surface_electrons(const SurfaceConfig& config,
                                         std::size_t site_budget) {
  if (config.electron_density_nm2 < 0.0)
    throw ConfigError("electron density must be non-negative");
  if (config.hole_fraction < 0.0 || config.hole_fraction > 1.0)
    throw ConfigError("hole fraction must lie in [0, 1]");

  BathRealization bath;
  bath.seed = config.seed;
  {
    std::ostringstream prov;
    prov << "surface_electrons rho=" << config.electron_density_nm2
         << " p_h=" << config.hole_fraction;
    bath.provenance = prov.str();
  }
  const double rho = config.electron_density_nm2;
  if (rho == 0.0) return bath;

  double extent = config.lateral_extent_nm;
  if (extent <= 0.0) extent = 40.0 / std::sqrt(rho);
  const double area = extent * extent;
  const double mean_sites = rho * area;
  if (mean_sites > static_cast<double>(site_budget))
    throw SizeError("surface electron request of ~" +
                    std::to_string(static_cast<std::size_t>(mean_sites)) +
                    " sites exceeds budget of " + std::to_string(site_budget));

  Rng rng = make_rng(config.seed);
  std::poisson_distribution<long> pois(mean_sites);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const long n_sites = pois(rng);
  const SpinSpecies& e = species_by_name("e");

  constexpr double kMinSeparationNm = 0.25;  // one surface site
  std::vector<Vec3> placed;
  placed.reserve(n_sites);
  int id = 0;
  for (long k = 0; k < n_sites; ++k) {
    Vec3 p;
    bool ok = false;
    for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
      p = Vec3((u01(rng) - 0.5) * extent, (u01(rng) - 0.5) * extent, 0.0);
      ok = true;
      for (const Vec3& q : placed)
        if ((p - q).norm() < kMinSeparationNm) {
          ok = false;
          break;
        }
    }
    if (!ok) continue;  // crowded draw discarded
    placed.push_back(p);
    if (u01(rng) < config.hole_fraction) {
      bath.holes.push_back(p);
    } else {
      BathSpin s;
      s.id = id++;
      s.species = e;
      s.position = p;
      bath.spins.push_back(std::move(s));
    }
  }
  return bath;
}

std::pair<CentralSpin, ExternalField> place_nv(const SurfaceConfig& surface,
                                               const NVPlacement& placement,
                                               double b_gauss) {
  if (placement.depth_nm <= 0.0)
    throw ConfigError("NV depth must be positive");
  double tilt = placement.tilt_overridden
                    ? placement.axis_tilt_deg
                    : facet_axis_tilt_deg(surface.orientation);
  const double t = tilt * kPi / 180.0;
  const Vec3 axis(std::sin(t), 0.0, std::cos(t));
  CentralSpin nv = make_nv(Vec3(0, 0, -placement.depth_nm), axis);
  ExternalField field = field_along(axis, b_gauss);
  return {nv, field};
}

BathRealization merge(const BathRealization& a, const BathRealization& b) {
  BathRealization out = a;
  out.provenance = a.provenance + " + " + b.provenance;
  for (BathSpin s : b.spins) {
    s.id = static_cast<int>(out.spins.size());
    out.spins.push_back(std::move(s));
  }
  for (const Vec3& h : b.holes) out.holes.push_back(h);
  // renumber to keep ids consecutive
  for (std::size_t i = 0; i < out.spins.size(); ++i)
    out.spins[i].id = static_cast<int>(i);
  return out;
}

BathRealization restrict_to_ball(const BathRealization& bath, const Vec3& center,
                                 double radius_nm) {
  BathRealization out;
  out.seed = bath.seed;
  out.provenance = bath.provenance + " |ball";
  const double r2 = radius_nm * radius_nm;
  for (const BathSpin& s : bath.spins)
    if ((s.position - center).squaredNorm() <= r2) {
      BathSpin c = s;
      c.id = static_cast<int>(out.spins.size());
      out.spins.push_back(std::move(c));
    }
  for (const Vec3& h : bath.holes)
    if ((h - center).squaredNorm() <= r2) out.holes.push_back(h);
  return out;
}

void write_bath_file(std::ostream& os, const BathRealization& bath) {
  os << "# id species x_nm y_nm z_nm kind [hyperfine 9] [quadrupole 9]\n";
  os << "# seed " << bath.seed << "\n";
  os << "# provenance " << bath.provenance << "\n";
  os.precision(12);
  for (const BathSpin& s : bath.spins) {
    os << s.id << " " << s.species.name << " " << s.position.x() << " "
       << s.position.y() << " " << s.position.z() << " spin";
    if (s.hyperfine_to_central) {
      const Mat3& m = s.hyperfine_to_central->m;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) os << " " << m(i, j);
    } else if (s.quadrupole) {
      for (int k = 0; k < 9; ++k) os << " nan";
    }
    if (s.quadrupole) {
      const Mat3& m = s.quadrupole->m;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) os << " " << m(i, j);
    }
    os << "\n";
  }
  int hid = static_cast<int>(bath.spins.size());
  for (const Vec3& h : bath.holes)
    os << hid++ << " e " << h.x() << " " << h.y() << " " << h.z() << " hole\n";
}

void write_bath_file(const std::string& path, const BathRealization& bath) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open bath file for writing: " + path);
  write_bath_file(os, bath);
}

BathRealization read_bath_file(std::istream& is) {
  BathRealization bath;
  bath.provenance = "file";
  std::string line;
  while (std::getline(is, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    int id;
    std::string species_name, kind;
    double x, y, z;
    if (!(ss >> id >> species_name >> x >> y >> z >> kind))
      throw ConfigError("malformed bath file row: " + line);
    if (kind == "hole") {
      bath.holes.emplace_back(x, y, z);
      continue;
    }
    if (kind != "spin")
      throw ConfigError("bath row kind must be spin|hole, got " + kind);
    BathSpin s;
    s.id = id;
    s.species = species_by_name(species_name);
    s.position = Vec3(x, y, z);
    // trailing tensor entries; 'nan' marks an absent hyperfine block
    std::vector<double> extra;
    std::string tok;
    while (ss >> tok) extra.push_back(std::stod(tok));
    if (extra.size() != 0 && extra.size() != 9 && extra.size() != 18)
      throw ConfigError("bath row must carry 0, 9 or 18 tensor entries");
    if (extra.size() >= 9 && !std::isnan(extra[0])) {
      CouplingTensor t;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t.m(i, j) = extra[i * 3 + j];
      s.hyperfine_to_central = t;
    }
    if (extra.size() == 18) {
      CouplingTensor t;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t.m(i, j) = extra[9 + i * 3 + j];
      s.quadrupole = t;
    }
    bath.spins.push_back(std::move(s));
  }
  return bath;
}

BathRealization read_bath_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open bath file: " + path);
  return read_bath_file(is);
}

}  // namespace spinbath
