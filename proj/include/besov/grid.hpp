#pragma once

// Cell-centered dyadic grids, sampled fields with a domain mask, and the
// JSON-header + binary-sidecar file format.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "besov/domain.hpp"
#include "besov/error.hpp"

namespace besov {

/// 2^J cells per axis over a cube; sample points at cell centers.
struct GridSpec {
  int d = 2;
  int J = 0;
  Cube box;

  std::size_t n() const { return std::size_t{1} << J; }
  std::size_t size() const { return d == 1 ? n() : n() * n(); }
  double h() const { return box.side / static_cast<double>(n()); }
  double cell_volume() const { return d == 1 ? h() : h() * h(); }
  Point point(std::size_t i1, std::size_t i2 = 0) const {
    const double hh = h();
    return {box.lo[0] + (static_cast<double>(i1) + 0.5) * hh,
            d == 1 ? 0.0 : box.lo[1] + (static_cast<double>(i2) + 0.5) * hh};
  }
  /// Flat index, x1 fastest.
  std::size_t index(std::size_t i1, std::size_t i2 = 0) const { return i2 * n() + i1; }
};

inline GridSpec grid_for(const DomainSpec& dom, int J) {
  require(J >= 1 && J <= 14, "grid level J must lie in [1, 14]");
  return GridSpec{dom.dim(), J, dom.bbox};
}

/// Real samples on a grid. Samples outside the domain are zero.
class GridFunction {
 public:
  GridFunction() = default;

  GridFunction(GridSpec spec, DomainSpec domain, std::vector<double> samples)
      : spec_(spec), domain_(std::make_shared<const DomainSpec>(std::move(domain))), samples_(std::move(samples)) {
    require(domain_->fits_in(spec_.box), "domain does not fit in the grid's bounding cube");
    require(spec_.d == domain_->dim(), "grid and domain dimensions differ");
    require(samples_.size() == spec_.size(), "sample array length must be (2^J)^d");
    build_mask();
    for (std::size_t i = 0; i < samples_.size(); ++i)
      if (!mask_[i]) samples_[i] = 0.0;
  }

  /// Samples f at the cell centers of the domain, zero elsewhere.
  static GridFunction sample(GridSpec spec, const DomainSpec& domain, const std::function<double(const Point&)>& f) {
    std::vector<double> v(spec.size(), 0.0);
    const std::size_t n = spec.n();
    const std::size_t n2 = spec.d == 1 ? 1 : n;
    for (std::size_t i2 = 0; i2 < n2; ++i2)
      for (std::size_t i1 = 0; i1 < n; ++i1) {
        const Point x = spec.point(i1, i2);
        if (domain.signed_distance(x) > 0) v[spec.index(i1, i2)] = f(x);
      }
    return GridFunction(spec, domain, std::move(v));
  }

  const GridSpec& spec() const { return spec_; }
  const DomainSpec& domain() const { return *domain_; }
  const std::vector<double>& samples() const { return samples_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  double operator[](std::size_t i) const { return samples_[i]; }
  double at(std::size_t i1, std::size_t i2 = 0) const { return samples_[spec_.index(i1, i2)]; }
  bool inside(std::size_t i1, std::size_t i2 = 0) const { return mask_[spec_.index(i1, i2)] != 0; }

  GridFunction scaled(double a) const {
    GridFunction g = *this;
    for (double& v : g.samples_) v *= a;
    return g;
  }

  /// L_p norm over the mask by midpoint quadrature; p may be infinite, and
  /// p < 1 gives the quasi-norm.
  double norm(double p) const {
    if (std::isinf(p)) {
      double m = 0;
      for (std::size_t i = 0; i < samples_.size(); ++i)
        if (mask_[i]) m = std::max(m, std::fabs(samples_[i]));
      return m;
    }
    double s = 0;
    for (std::size_t i = 0; i < samples_.size(); ++i)
      if (mask_[i] && samples_[i] != 0.0) s += std::pow(std::fabs(samples_[i]), p);
    return std::pow(s * spec_.cell_volume(), 1.0 / p);
  }

 private:
  void build_mask() {
    mask_.assign(spec_.size(), 0);
    const std::size_t n = spec_.n();
    const std::size_t n2 = spec_.d == 1 ? 1 : n;
    for (std::size_t i2 = 0; i2 < n2; ++i2)
      for (std::size_t i1 = 0; i1 < n; ++i1)
        mask_[spec_.index(i1, i2)] = domain_->signed_distance(spec_.point(i1, i2)) > 0 ? 1 : 0;
  }

  GridSpec spec_;
  std::shared_ptr<const DomainSpec> domain_ = std::make_shared<const DomainSpec>();
  std::vector<double> samples_;
  std::vector<std::uint8_t> mask_;
};

/// L_p(mask) norm of a plain sample array laid out on spec.
inline double masked_norm(const GridSpec& spec, const std::vector<std::uint8_t>& mask, const std::vector<double>& v,
                          double p) {
  if (std::isinf(p)) {
    double m = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (mask[i]) m = std::max(m, std::fabs(v[i]));
    return m;
  }
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (mask[i] && v[i] != 0.0) s += std::pow(std::fabs(v[i]), p);
  return std::pow(s * spec.cell_volume(), 1.0 / p);
}

// ---------------------------------------------------------------------------
// file format

inline nlohmann::json to_json(const DomainSpec& d) {
  nlohmann::json j;
  j["kind"] = to_string(d.kind);
  switch (d.kind) {
    case DomainKind::unit_square: break;
    case DomainKind::scaled_cube:
      j["d"] = d.bbox.d;
      j["lo"] = d.bbox.d == 1 ? nlohmann::json::array({d.bbox.lo[0]}) : nlohmann::json::array({d.bbox.lo[0], d.bbox.lo[1]});
      j["side"] = d.bbox.side;
      break;
    case DomainKind::l_shape:
    case DomainKind::polygon: {
      auto arr = nlohmann::json::array();
      for (const auto& v : d.vertices) arr.push_back({v[0], v[1]});
      j["vertices"] = arr;
      if (d.kind == DomainKind::polygon)
        j["bbox"] = {{"lo", {d.bbox.lo[0], d.bbox.lo[1]}}, {"side", d.bbox.side}};
      break;
    }
    case DomainKind::circular_sector:
      j["radius"] = d.radius;
      j["omega"] = d.omega;
      break;
  }
  return j;
}

inline DomainSpec domain_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "unit-square") return unit_square();
    if (kind == "L-shape") return l_shape();
    if (kind == "scaled-cube") {
      const int d = j.value("d", 2);
      const auto lo = j.at("lo");
      Point p{lo.at(0).get<double>(), d == 2 ? lo.at(1).get<double>() : 0.0};
      return cube_domain(d, p, j.at("side").get<double>());
    }
    if (kind == "polygon") {
      std::vector<Point> v;
      for (const auto& e : j.at("vertices")) v.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
      std::optional<Cube> box;
      if (j.contains("bbox")) {
        const auto& b = j["bbox"];
        box = Cube{2, {b.at("lo").at(0).get<double>(), b.at("lo").at(1).get<double>()}, b.at("side").get<double>()};
      }
      return polygon(std::move(v), box);
    }
    if (kind == "circular-sector") return sector(j.at("radius").get<double>(), j.at("omega").get<double>());
    throw FormatError("unknown domain kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed domain description: ") + e.what());
  }
}

namespace detail {

inline void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open '" + tmp.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::string encode_le(const std::vector<double>& v) {
  std::string out(v.size() * 8, '\0');
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t u = std::bit_cast<std::uint64_t>(v[i]);
    for (int b = 0; b < 8; ++b) out[i * 8 + b] = static_cast<char>((u >> (8 * b)) & 0xff);
  }
  return out;
}

inline std::vector<double> decode_le(const std::string& s) {
  std::vector<double> v(s.size() / 8);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t u = 0;
    for (int b = 0; b < 8; ++b) u |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[i * 8 + b])) << (8 * b);
    v[i] = std::bit_cast<double>(u);
  }
  return v;
}

}  // namespace detail

/// Writes `path` (JSON header) and `path` + ".bin" (little-endian float64 samples).
inline void save_grid(const GridFunction& g, const std::filesystem::path& path) {
  const auto& s = g.spec();
  nlohmann::json h;
  h["d"] = s.d;
  h["J"] = s.J;
  h["bbox"] = {{"lo", s.d == 1 ? nlohmann::json::array({s.box.lo[0]}) : nlohmann::json::array({s.box.lo[0], s.box.lo[1]})},
               {"side", s.box.side}};
  h["domain"] = to_json(g.domain());
  const std::filesystem::path bin = path.string() + ".bin";
  h["data"] = bin.filename().string();
  h["dtype"] = "float64-le";
  h["order"] = "row-major, x1 fastest";
  detail::write_atomic(bin, detail::encode_le(g.samples()));
  detail::write_atomic(path, h.dump(2) + "\n");
}

/// Reads a grid file; the mask is rebuilt from the domain description.
/// Non-zero samples outside the domain indicate a mismatched domain and are rejected.
inline GridFunction load_grid(const std::filesystem::path& path) {
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(detail::read_all(path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("grid header '" + path.string() + "' is not valid JSON: " + e.what());
  }
  GridSpec spec;
  DomainSpec dom;
  std::filesystem::path bin;
  try {
    spec.d = h.at("d").get<int>();
    spec.J = h.at("J").get<int>();
    const auto& lo = h.at("bbox").at("lo");
    spec.box = Cube{spec.d, {lo.at(0).get<double>(), spec.d == 2 ? lo.at(1).get<double>() : 0.0},
                    h.at("bbox").at("side").get<double>()};
    if (h.value("dtype", "float64-le") != "float64-le") throw FormatError("unsupported dtype");
    dom = domain_from_json(h.at("domain"));
    bin = path.parent_path() / h.at("data").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed grid header: " + std::string(e.what()));
  }
  if (spec.d != 1 && spec.d != 2) throw FormatError("grid dimension must be 1 or 2");
  if (spec.J < 1 || spec.J > 14) throw FormatError("grid level out of range");
  if (!dom.fits_in(spec.box)) throw FormatError("domain does not fit in the grid's bounding cube");
  const std::string raw = detail::read_all(bin);
  if (raw.size() != spec.size() * 8)
    throw FormatError("sample file has " + std::to_string(raw.size()) + " bytes, expected " +
                      std::to_string(spec.size() * 8));
  std::vector<double> v = detail::decode_le(raw);
  GridFunction g(spec, dom, v);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0.0 && !g.mask()[i])
      throw FormatError("non-zero sample outside the domain: grid and domain description do not match");
  return g;
}

}  // namespace besov
