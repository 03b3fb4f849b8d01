#include "latbose/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

namespace latbose {

namespace {

using json = nlohmann::json;

bool in_positive_half_space(const IVec3& m) {
  for (int c : m) {
    if (c > 0) return true;
    if (c < 0) return false;
  }
  return false;  // the zero vector is not a direction
}

std::string format_m(const IVec3& m) {
  std::ostringstream os;
  os << "(" << m[0] << "," << m[1] << "," << m[2] << ")";
  return os.str();
}

// Reduces an integer into {-L/2, ..., L/2} modulo L+1.
int wrap_component(long long v, int L) {
  const long long P = L + 1;
  long long r = ((v + L / 2) % P + P) % P;
  return static_cast<int>(r - L / 2);
}

}  // namespace

double sin2_pi_ratio(long long num, long long den) {
  if (den <= 0) fail(ErrorKind::InvalidArgument, "sin2_pi_ratio needs a positive denominator");
  long long r = num % den;
  if (r < 0) r += den;
  if (2 * r > den) r = den - r;  // sin^2 is symmetric about pi/2
  // Angles that are multiples of pi/12 with a representable square sine are returned exactly.
  if ((12 * r) % den == 0) {
    switch (12 * r / den) {
      case 0: return 0.0;
      case 2: return 0.25;
      case 3: return 0.5;
      case 4: return 0.75;
      case 6: return 1.0;
      default: break;
    }
  }
  const double s = std::sin(std::numbers::pi * static_cast<double>(r) / static_cast<double>(den));
  return s * s;
}

Mat3 reciprocal_basis(const Mat3& A) {
  const double det = A.determinant();
  const double scale = A.cwiseAbs().maxCoeff();
  if (!std::isfinite(det) || scale == 0.0 ||
      std::abs(det) <= 1e-12 * scale * scale * scale) {
    fail(ErrorKind::SingularBasis, "primitive vectors are linearly dependent (det A = " +
                                       std::to_string(det) + ")");
  }
  return 2.0 * std::numbers::pi * A.inverse().transpose();
}

LatticeModel::LatticeModel(const Mat3& primitive_vectors, std::vector<Hopping> hopping, double U)
    : A_(primitive_vectors), B_(reciprocal_basis(primitive_vectors)),
      hopping_(std::move(hopping)), U_(U) {
  if (!std::isfinite(U_) || U_ < 0.0)
    fail(ErrorKind::InvalidArgument, "U must be finite and nonnegative");
  if (hopping_.empty())
    fail(ErrorKind::MissingPrimitiveHopping, "hopping table is empty");

  std::set<IVec3> seen;
  int max_component = 0;
  for (const auto& h : hopping_) {
    if (!std::isfinite(h.t) || h.t <= 0.0)
      fail(ErrorKind::NonPositiveWeight, "hopping weight for m=" + format_m(h.m) + " must be > 0");
    if (!in_positive_half_space(h.m))
      fail(ErrorKind::DirectionNotPositive,
           "direction m=" + format_m(h.m) + " must have a positive first nonzero component");
    if (!seen.insert(h.m).second)
      fail(ErrorKind::DuplicateDirection, "direction m=" + format_m(h.m) + " listed twice");
    for (int c : h.m) max_component = std::max(max_component, std::abs(c));
  }

  c_gap_ = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    IVec3 e{0, 0, 0};
    e[axis] = 1;
    if (!seen.count(e))
      fail(ErrorKind::MissingPrimitiveHopping,
           "hopping along primitive vector a" + std::to_string(axis + 1) + " is missing");
    c_gap_ = std::min(c_gap_, primitive_hopping(axis));
  }
  R0_ = std::max(2, 2 * max_component);
}

double LatticeModel::primitive_hopping(int axis) const {
  if (axis < 0 || axis > 2) fail(ErrorKind::InvalidArgument, "axis must be 0, 1 or 2");
  for (const auto& h : hopping_) {
    IVec3 e{0, 0, 0};
    e[axis] = 1;
    if (h.m == e) return h.t;
  }
  return 0.0;
}

Vec3 LatticeModel::direction(const Hopping& h) const {
  return A_ * Vec3(h.m[0], h.m[1], h.m[2]);
}

Mat3 LatticeModel::quadratic_form() const {
  Mat3 M = Mat3::Zero();
  for (const auto& h : hopping_) {
    const Vec3 v = direction(h);
    M += h.t * v * v.transpose();
  }
  return M;
}

LatticeModel LatticeModel::with_U(double U) const { return LatticeModel(A_, hopping_, U); }

LatticeModel LatticeModel::with_scaled_hopping(double lambda) const {
  if (!(lambda > 0.0)) fail(ErrorKind::InvalidArgument, "hopping scale must be positive");
  auto scaled = hopping_;
  for (auto& h : scaled) h.t *= lambda;
  return LatticeModel(A_, std::move(scaled), U_);
}

LatticeModel build_lattice(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidConfig, std::string("lattice config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::InvalidConfig, "lattice config must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "primitive_vectors" && key != "hopping" && key != "U")
      fail(ErrorKind::InvalidConfig, "unknown field '" + key + "' in lattice config");
  }
  for (const char* key : {"primitive_vectors", "hopping", "U"}) {
    if (!doc.contains(key))
      fail(ErrorKind::InvalidConfig, std::string("lattice config is missing '") + key + "'");
  }

  Mat3 A;
  const auto& rows = doc["primitive_vectors"];
  if (!rows.is_array() || rows.size() != 3)
    fail(ErrorKind::InvalidConfig, "primitive_vectors must be three 3-vectors");
  for (int i = 0; i < 3; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || row.size() != 3)
      fail(ErrorKind::InvalidConfig, "primitive_vectors must be three 3-vectors");
    for (int j = 0; j < 3; ++j) {
      if (!row[j].is_number())
        fail(ErrorKind::InvalidConfig, "primitive_vectors entries must be numbers");
      A(j, i) = row[j].get<double>();  // row i of the document is column a_i
    }
  }

  std::vector<Hopping> hopping;
  const auto& table = doc["hopping"];
  if (!table.is_array()) fail(ErrorKind::InvalidConfig, "hopping must be an array");
  for (const auto& entry : table) {
    if (!entry.is_object()) fail(ErrorKind::InvalidConfig, "hopping entries must be objects");
    for (const auto& [key, _] : entry.items()) {
      if (key != "m" && key != "t")
        fail(ErrorKind::InvalidConfig, "unknown field '" + key + "' in hopping entry");
    }
    if (!entry.contains("m") || !entry.contains("t"))
      fail(ErrorKind::InvalidConfig, "hopping entries need 'm' and 't'");
    const auto& m = entry["m"];
    if (!m.is_array() || m.size() != 3)
      fail(ErrorKind::InvalidConfig, "hopping 'm' must be an integer 3-vector");
    Hopping h;
    for (int j = 0; j < 3; ++j) {
      if (!m[j].is_number_integer())
        fail(ErrorKind::InvalidConfig, "hopping 'm' must be an integer 3-vector");
      h.m[j] = m[j].get<int>();
    }
    if (!entry["t"].is_number()) fail(ErrorKind::InvalidConfig, "hopping 't' must be a number");
    h.t = entry["t"].get<double>();
    hopping.push_back(h);
  }

  if (!doc["U"].is_number()) fail(ErrorKind::InvalidConfig, "U must be a number");
  const double U = doc["U"].get<double>();
  if (!(U > 0.0) || !std::isfinite(U))
    fail(ErrorKind::InvalidConfig, "U must be a positive finite number");
  return LatticeModel(A, std::move(hopping), U);
}

LatticeModel load_lattice(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidConfig, "cannot read lattice config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return build_lattice(buffer.str());
}

std::string to_json(const LatticeModel& model) {
  json doc;
  const Mat3& A = model.primitive_vectors();
  doc["primitive_vectors"] = json::array();
  for (int i = 0; i < 3; ++i) doc["primitive_vectors"].push_back({A(0, i), A(1, i), A(2, i)});
  doc["hopping"] = json::array();
  for (const auto& h : model.hopping()) doc["hopping"].push_back({{"m", h.m}, {"t", h.t}});
  doc["U"] = model.U();
  return doc.dump();
}

double dispersion(const LatticeModel& model, const Vec3& p) {
  double e = 0.0;
  for (const auto& h : model.hopping()) {
    const double s = std::sin(0.5 * model.direction(h).dot(p));
    e += 4.0 * h.t * s * s;
  }
  return e;
}

double dispersion_reduced(const LatticeModel& model, const Vec3& theta) {
  // v.p = 2 pi m.theta when p = B theta.
  double e = 0.0;
  for (const auto& h : model.hopping()) {
    const double phase = h.m[0] * theta[0] + h.m[1] * theta[1] + h.m[2] * theta[2];
    const double s = std::sin(std::numbers::pi * phase);
    e += 4.0 * h.t * s * s;
  }
  return e;
}

double quadratic_bound_radius(const LatticeModel& model) {
  // Fibonacci sphere directions, radii probed from the BZ scale downward.
  constexpr int kDirections = 400;
  constexpr int kRadialSamples = 24;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> dirs(kDirections);
  for (int i = 0; i < kDirections; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / kDirections;
    const double r = std::sqrt(1.0 - z * z);
    dirs[i] = Vec3(r * std::cos(golden * i), r * std::sin(golden * i), z);
  }
  const Mat3& B = model.reciprocal();
  double r_max = B.col(0).norm();
  for (int j = 1; j < 3; ++j) r_max = std::min(r_max, B.col(j).norm());
  r_max *= 0.5;

  const double c = model.c_gap();
  for (double radius = r_max; radius > 1e-6 * r_max; radius *= 0.9) {
    bool ok = true;
    for (int k = 1; k <= kRadialSamples && ok; ++k) {
      const double r = radius * k / kRadialSamples;
      for (const auto& d : dirs) {
        if (dispersion(model, r * d) < 0.5 * c * r * r) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return radius;
  }
  return 0.0;
}

void require_even_size(int L) {
  if (L <= 0 || L % 2 != 0)
    fail(ErrorKind::OddLatticeSize, "lattice size must be a positive even integer, got " +
                                        std::to_string(L));
}

FiniteLattice::FiniteLattice(LatticeModel model, int L) : model_(std::move(model)), L_(L) {
  require_even_size(L);
}

std::size_t FiniteLattice::size() const noexcept {
  const std::size_t P = static_cast<std::size_t>(L_) + 1;
  return P * P * P;
}

std::size_t FiniteLattice::index(const IVec3& m) const {
  const IVec3 w = wrap(m);
  const std::size_t P = static_cast<std::size_t>(L_) + 1;
  const std::size_t h = static_cast<std::size_t>(L_ / 2);
  return ((w[0] + h) * P + (w[1] + h)) * P + (w[2] + h);
}

IVec3 FiniteLattice::coords(std::size_t index) const {
  const std::size_t P = static_cast<std::size_t>(L_) + 1;
  const int h = L_ / 2;
  IVec3 m;
  m[2] = static_cast<int>(index % P) - h;
  index /= P;
  m[1] = static_cast<int>(index % P) - h;
  m[0] = static_cast<int>(index / P) - h;
  return m;
}

IVec3 FiniteLattice::wrap(const IVec3& m) const {
  return {wrap_component(m[0], L_), wrap_component(m[1], L_), wrap_component(m[2], L_)};
}

Vec3 FiniteLattice::position(const IVec3& m) const {
  return model_.primitive_vectors() * Vec3(m[0], m[1], m[2]);
}

void FiniteLattice::require_hopping_fits() const {
  if (L_ < model_.hopping_length())
    fail(ErrorKind::GridTooCoarse, "L=" + std::to_string(L_) + " is below the hopping length " +
                                       std::to_string(model_.hopping_length()));
}

MomentumGrid momentum_grid(const FiniteLattice& lattice) {
  MomentumGrid grid;
  grid.L = lattice.L();
  const std::size_t n = lattice.size();
  grid.labels.resize(n);
  grid.points.resize(n);
  const Mat3& B = lattice.model().reciprocal();
  const double inv = 1.0 / lattice.period();
  for (std::size_t i = 0; i < n; ++i) {
    const IVec3 k = lattice.coords(i);
    grid.labels[i] = k;
    grid.points[i] = B * Vec3(k[0] * inv, k[1] * inv, k[2] * inv);
    if (k[0] == 0 && k[1] == 0 && k[2] == 0) grid.zero_index = i;
  }
  return grid;
}

std::vector<double> grid_dispersion(const FiniteLattice& lattice) {
  const std::size_t n = lattice.size();
  const long long P = lattice.period();
  std::vector<double> eps(n, 0.0);
  const auto hopping = lattice.model().hopping();
  for (std::size_t i = 0; i < n; ++i) {
    const IVec3 k = lattice.coords(i);
    double e = 0.0;
    for (const auto& h : hopping) {
      const long long phase = 1LL * h.m[0] * k[0] + 1LL * h.m[1] * k[1] + 1LL * h.m[2] * k[2];
      e += 4.0 * h.t * sin2_pi_ratio(phase, P);
    }
    eps[i] = e;
  }
  return eps;
}

namespace {

// Applies the 1D transform along one axis of the (P x P x P) array, sign -1 forward.
void transform_axis(std::vector<std::complex<double>>& data, int L, int axis, int sign) {
  const int P = L + 1;
  const int h = L / 2;
  std::vector<std::complex<double>> phase(static_cast<std::size_t>(P) * P);
  for (int k = 0; k < P; ++k) {
    for (int m = 0; m < P; ++m) {
      const long long prod = 1LL * (k - h) * (m - h);
      long long r = prod % P;
      if (r < 0) r += P;
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(r) / P;
      phase[static_cast<std::size_t>(k) * P + m] = {std::cos(angle), std::sin(angle)};
    }
  }
  const std::size_t stride = axis == 0 ? static_cast<std::size_t>(P) * P : (axis == 1 ? P : 1);
  std::vector<std::complex<double>> line(P), out(P);
  for (int a = 0; a < P; ++a) {
    for (int b = 0; b < P; ++b) {
      std::size_t base;
      if (axis == 0) base = static_cast<std::size_t>(a) * P + b;
      else if (axis == 1) base = static_cast<std::size_t>(a) * P * P + b;
      else base = (static_cast<std::size_t>(a) * P + b) * P;
      for (int m = 0; m < P; ++m) line[m] = data[base + m * stride];
      for (int k = 0; k < P; ++k) {
        std::complex<double> s = 0.0;
        for (int m = 0; m < P; ++m) s += phase[static_cast<std::size_t>(k) * P + m] * line[m];
        out[k] = s;
      }
      for (int k = 0; k < P; ++k) data[base + k * stride] = out[k];
    }
  }
}

std::vector<std::complex<double>> separable_transform(const FiniteLattice& lattice,
                                                      std::span<const std::complex<double>> f,
                                                      int sign) {
  if (f.size() != lattice.size())
    fail(ErrorKind::InvalidArgument, "Fourier input size does not match the lattice");
  std::vector<std::complex<double>> data(f.begin(), f.end());
  for (int axis = 0; axis < 3; ++axis) transform_axis(data, lattice.L(), axis, sign);
  const double norm = 1.0 / std::sqrt(static_cast<double>(lattice.size()));
  for (auto& z : data) z *= norm;
  return data;
}

}  // namespace

std::vector<std::complex<double>> fourier_transform(const FiniteLattice& lattice,
                                                    std::span<const std::complex<double>> f) {
  return separable_transform(lattice, f, -1);
}

std::vector<std::complex<double>> inverse_fourier_transform(
    const FiniteLattice& lattice, std::span<const std::complex<double>> g) {
  return separable_transform(lattice, g, +1);
}

}  // namespace latbose
