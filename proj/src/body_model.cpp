#include "f2bp/body_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

namespace f2bp {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class Fn>
void for_each_record(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto tokens = split_ws(line);
    if (!tokens.empty() && tokens.front().front() != '#') fn(tokens, line_no);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

double to_double(std::string_view tok, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw ParseError("expected a number, got '" + std::string(tok) + "'", line_no);
  }
  return v;
}

long to_index(std::string_view tok, std::size_t line_no) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("expected an integer vertex index, got '" + std::string(tok) + "'", line_no);
  }
  return v;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Simplex> make_simplices(const std::vector<Vec3>& vertices,
                                    const std::vector<std::array<int, 3>>& faces,
                                    const std::vector<double>& density, const Vec3& origin) {
  std::vector<Simplex> out;
  out.reserve(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    Simplex s;
    for (int c = 0; c < 3; ++c) s.vertices.col(c) = vertices[faces[f][c]] - origin;
    s.density = density[f];
    s.jacobian = s.vertices.determinant();
    out.push_back(s);
  }
  return out;
}

// Proper eigenbasis (det +1) with the largest trace, i.e. the smallest
// rotation away from the current axes.
Mat3 closest_principal_basis(const Mat3& eigvecs) {
  std::array<int, 3> perm{0, 1, 2};
  Mat3 best = Mat3::Identity();
  double best_trace = -std::numeric_limits<double>::infinity();
  do {
    for (int signs = 0; signs < 8; ++signs) {
      Mat3 p;
      for (int c = 0; c < 3; ++c) {
        const double s = (signs >> c) & 1 ? -1.0 : 1.0;
        p.col(c) = s * eigvecs.col(perm[c]);
      }
      if (p.determinant() <= 0.0) continue;
      if (p.trace() > best_trace + 1e-14) {
        best_trace = p.trace();
        best = p;
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

Vec3 PolyhedralBody::assembled_centroid() const {
  const auto props = mass_properties(simplices);
  return props.first_moment / props.mass;
}

void ScaleFactors::validate() const {
  if (!(length > 0.0) || !(mass > 0.0) || !(time > 0.0) || !std::isfinite(length) ||
      !std::isfinite(mass) || !std::isfinite(time)) {
    throw ConfigError("scale factors must be finite and strictly positive");
  }
}

RawBodyModel parse_body_model(std::string_view vertex_text, std::string_view face_text,
                              double default_density) {
  RawBodyModel raw;
  for_each_record(vertex_text, [&](const auto& tok, std::size_t line_no) {
    if (tok.size() != 3) {
      throw ParseError("vertex row needs 3 coordinates, found " + std::to_string(tok.size()),
                       line_no);
    }
    raw.vertices.emplace_back(to_double(tok[0], line_no), to_double(tok[1], line_no),
                              to_double(tok[2], line_no));
  });
  const long nv = static_cast<long>(raw.vertices.size());
  for_each_record(face_text, [&](const auto& tok, std::size_t line_no) {
    if (tok.size() != 3 && tok.size() != 4) {
      throw ParseError("face row needs 3 indices and an optional density, found " +
                           std::to_string(tok.size()) + " values",
                       line_no);
    }
    std::array<int, 3> face{};
    for (int c = 0; c < 3; ++c) {
      const long idx = to_index(tok[c], line_no);
      if (idx < 1 || idx > nv) {
        throw TopologyError("face on line " + std::to_string(line_no) + " references vertex " +
                            std::to_string(idx) + " of " + std::to_string(nv));
      }
      face[c] = static_cast<int>(idx - 1);
    }
    double rho = default_density;
    if (tok.size() == 4) rho = to_double(tok[3], line_no);
    if (rho < 0.0) throw ParseError("negative density", line_no);
    raw.faces.push_back(face);
    raw.density.push_back(rho);
  });
  validate_topology(raw);
  return raw;
}

RawBodyModel load_body_model(const std::filesystem::path& vertex_file,
                             const std::filesystem::path& face_file, double default_density) {
  return parse_body_model(read_file(vertex_file), read_file(face_file), default_density);
}

void validate_topology(const RawBodyModel& raw) {
  if (raw.vertices.size() < 4 || raw.faces.size() < 4) {
    throw TopologyError("a closed polyhedron needs at least 4 vertices and 4 faces");
  }
  if (raw.density.size() != raw.faces.size()) {
    throw TopologyError("density column does not match the face count");
  }
  const int nv = static_cast<int>(raw.vertices.size());
  std::map<std::pair<int, int>, int> directed;
  for (std::size_t f = 0; f < raw.faces.size(); ++f) {
    const auto& face = raw.faces[f];
    for (int c = 0; c < 3; ++c) {
      if (face[c] < 0 || face[c] >= nv) {
        throw TopologyError("face " + std::to_string(f + 1) + " has an out-of-range index");
      }
    }
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) {
      throw TopologyError("face " + std::to_string(f + 1) + " repeats a vertex");
    }
    for (int c = 0; c < 3; ++c) ++directed[{face[c], face[(c + 1) % 3]}];
  }
  for (const auto& [edge, count] : directed) {
    const auto reverse = directed.find({edge.second, edge.first});
    const int undirected = count + (reverse == directed.end() ? 0 : reverse->second);
    if (undirected != 2) {
      throw TopologyError("edge " + std::to_string(edge.first + 1) + "-" +
                          std::to_string(edge.second + 1) + " is shared by " +
                          std::to_string(undirected) + " faces; surface is not closed");
    }
    if (count != 1) {
      throw TopologyError("edge " + std::to_string(edge.first + 1) + "-" +
                          std::to_string(edge.second + 1) + " has inconsistent face orientation");
    }
  }
}

Mat3 simplex_nonstandard_inertia(const Mat3& v, double density) {
  // int over the simplex of r r^T with r = sum sigma_i v_i, using
  // int sigma_i^2 = 1/60 and int sigma_i sigma_j = 1/120 on the unit simplex.
  const double t = v.determinant();
  const Vec3 s = v.rowwise().sum();
  return density * t / 120.0 * (v * v.transpose() + s * s.transpose());
}

Mat3 simplex_inertia(const Mat3& v, double density) {
  const Mat3 jd = simplex_nonstandard_inertia(v, density);
  return jd.trace() * Mat3::Identity() - jd;
}

MassProperties mass_properties(const std::vector<Simplex>& simplices) {
  MassProperties p;
  Mat3 jd = Mat3::Zero();
  for (const auto& s : simplices) {
    p.volume += s.jacobian / 6.0;
    p.mass += s.mass();
    p.first_moment += s.density * s.jacobian / 24.0 * s.vertices.rowwise().sum();
    jd += simplex_nonstandard_inertia(s.vertices, s.density);
  }
  p.inertia = jd.trace() * Mat3::Identity() - jd;
  return p;
}

PolyhedralBody build_body(const RawBodyModel& raw) {
  validate_topology(raw);

  Vec3 origin = Vec3::Zero();
  for (const auto& v : raw.vertices) origin += v;
  origin /= static_cast<double>(raw.vertices.size());

  auto simplices = make_simplices(raw.vertices, raw.faces, raw.density, origin);
  auto props = mass_properties(simplices);
  if (!(props.volume > 0.0)) {
    throw DegenerateBodyError("total signed volume is not positive; check face orientation");
  }
  if (!(props.mass > 0.0)) throw DegenerateBodyError("total mass is not positive");

  // Two centering passes: the second removes the round-off left by the first.
  Vec3 centroid = origin + props.first_moment / props.mass;
  std::vector<Vec3> centered(raw.vertices.size());
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < raw.vertices.size(); ++i) centered[i] = raw.vertices[i] - centroid;
    simplices = make_simplices(centered, raw.faces, raw.density, Vec3::Zero());
    props = mass_properties(simplices);
    if (pass == 0) centroid += props.first_moment / props.mass;
  }

  const Mat3& j = props.inertia;
  const double off = std::abs(j(0, 1)) + std::abs(j(0, 2)) + std::abs(j(1, 2));
  Mat3 axes = Mat3::Identity();
  if (off > 1e-14 * j.trace()) {
    Eigen::SelfAdjointEigenSolver<Mat3> eig(j);
    axes = closest_principal_basis(eig.eigenvectors());
  }

  PolyhedralBody body;
  body.faces = raw.faces;
  body.centroid_offset = centroid;
  body.principal_axes = axes;
  body.vertices.reserve(centered.size());
  for (const auto& v : centered) body.vertices.push_back(axes.transpose() * v);
  body.simplices = make_simplices(body.vertices, raw.faces, raw.density, Vec3::Zero());

  props = mass_properties(body.simplices);
  body.mass = props.mass;
  body.volume = props.volume;
  body.inertia = props.inertia;
  body.inertia_nonstandard = 0.5 * body.inertia.trace() * Mat3::Identity() - body.inertia;

  Eigen::SelfAdjointEigenSolver<Mat3> eig(body.inertia, Eigen::EigenvaluesOnly);
  const Vec3 moments = eig.eigenvalues();
  if (!(moments.minCoeff() > 1e-12 * moments.maxCoeff())) {
    throw DegenerateBodyError("inertia matrix is singular or indefinite");
  }

  for (const auto& f : body.faces) {
    const Vec3& a = body.vertices[f[0]];
    const Vec3& b = body.vertices[f[1]];
    const Vec3& c = body.vertices[f[2]];
    body.surface_area += 0.5 * (b - a).cross(c - a).norm();
  }
  body.equiv_radius = std::cbrt(3.0 * body.volume / (4.0 * std::numbers::pi));
  for (const auto& v : body.vertices) {
    body.circumscribing_radius = std::max(body.circumscribing_radius, v.norm());
  }
  return body;
}

PolyhedralBody nondimensionalize(const PolyhedralBody& body, const ScaleFactors& s) {
  s.validate();
  const double l = s.length;
  const double l3 = l * l * l;
  PolyhedralBody out = body;
  for (auto& v : out.vertices) v /= l;
  for (auto& sx : out.simplices) {
    sx.vertices /= l;
    sx.jacobian /= l3;
    sx.density *= l3 / s.mass;
  }
  out.mass /= s.mass;
  out.inertia /= s.mass * l * l;
  out.inertia_nonstandard /= s.mass * l * l;
  out.volume /= l3;
  out.surface_area /= l * l;
  out.equiv_radius /= l;
  out.circumscribing_radius /= l;
  out.centroid_offset /= l;
  return out;
}

double nondimensionalize_gravity(double G, const ScaleFactors& s) {
  s.validate();
  return G * s.mass * s.time * s.time / (s.length * s.length * s.length);
}

RawBodyModel make_octahedron(double a, double b, double c, double density) {
  RawBodyModel raw;
  raw.vertices = {Vec3(a, 0, 0), Vec3(-a, 0, 0), Vec3(0, b, 0),
                  Vec3(0, -b, 0), Vec3(0, 0, c), Vec3(0, 0, -c)};
  for (int sz : {1, -1}) {
    for (int sy : {1, -1}) {
      for (int sx : {1, -1}) {
        const int x = sx > 0 ? 0 : 1;
        const int y = sy > 0 ? 2 : 3;
        const int z = sz > 0 ? 4 : 5;
        // (x, y, z) is counterclockwise from outside exactly when the octant
        // sign product is positive.
        if (sx * sy * sz > 0) {
          raw.faces.push_back({x, y, z});
        } else {
          raw.faces.push_back({x, z, y});
        }
        raw.density.push_back(density);
      }
    }
  }
  return raw;
}

}  // namespace f2bp
