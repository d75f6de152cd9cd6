#pragma once

#include "f2bp/common.hpp"

#include <array>
#include <filesystem>
#include <string_view>
#include <vector>

namespace f2bp {

/// Vertex and face lists as read from a body-model file pair.
///
/// Faces are stored zero-based here even though the files are one-based.
/// Each face is counterclockwise when viewed from outside the body.
struct RawBodyModel {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<double> density;  ///< kg/m^3, one per face
};

/// One tetrahedron {centroid, v1, v2, v3}. Columns of `vertices` are v1..v3.
struct Simplex {
  Mat3 vertices;
  double density = 0.0;
  double jacobian = 0.0;  ///< det(vertices), six times the signed volume

  double mass() const { return density * jacobian / 6.0; }
};

/// A body in its centered principal-axis frame, ready for the pair sums.
struct PolyhedralBody {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<Simplex> simplices;
  double mass = 0.0;
  Mat3 inertia = Mat3::Zero();              ///< standard inertia J
  Mat3 inertia_nonstandard = Mat3::Zero();  ///< J_d = tr(J)/2 I - J
  double volume = 0.0;
  double surface_area = 0.0;
  double equiv_radius = 0.0;
  double circumscribing_radius = 0.0;  ///< max vertex distance from the centroid

  /// Input-frame placement: x_input = centroid_offset + principal_axes * x_body.
  Vec3 centroid_offset = Vec3::Zero();
  Mat3 principal_axes = Mat3::Identity();

  /// Mass-weighted centroid assembled from the simplices (zero after build_body).
  Vec3 assembled_centroid() const;
};

/// Divisors used to nondimensionalize lengths, masses and times.
struct ScaleFactors {
  double length = 1.0;
  double mass = 1.0;
  double time = 1.0;

  void validate() const;
  ScaleFactors inverse() const { return {1.0 / length, 1.0 / mass, 1.0 / time}; }
  bool is_identity() const { return length == 1.0 && mass == 1.0 && time == 1.0; }
};

/// Parses whitespace-separated vertex rows `x y z` and face rows `i j k [rho]`.
/// Lines that are blank or start with '#' are skipped.
RawBodyModel parse_body_model(std::string_view vertex_text, std::string_view face_text,
                              double default_density);

RawBodyModel load_body_model(const std::filesystem::path& vertex_file,
                             const std::filesystem::path& face_file, double default_density);

/// Index bounds, distinct corners and closed two-manifold edges.
void validate_topology(const RawBodyModel& raw);

/// Centers the body on its centroid, rotates it to principal axes and fills in
/// the mass properties.
///
/// The principal rotation is the proper eigenbasis closest to the input axes,
/// so an already principal body keeps its orientation.
PolyhedralBody build_body(const RawBodyModel& raw);

/// Standard inertia of the tetrahedron {0, v1, v2, v3} about the origin.
/// Signed: a negatively oriented simplex subtracts.
Mat3 simplex_inertia(const Mat3& vertices, double density);

/// Nonstandard inertia integral rho * int r r^T dV of the same tetrahedron.
Mat3 simplex_nonstandard_inertia(const Mat3& vertices, double density);

/// Mass properties from a set of simplices sharing the origin.
struct MassProperties {
  double mass = 0.0;
  double volume = 0.0;
  Vec3 first_moment = Vec3::Zero();  ///< int rho r dV
  Mat3 inertia = Mat3::Zero();
};
MassProperties mass_properties(const std::vector<Simplex>& simplices);

/// Divides lengths by s.length and masses by s.mass.
PolyhedralBody nondimensionalize(const PolyhedralBody& body, const ScaleFactors& s);

/// G expressed in the scaled units: G * mass * time^2 / length^3.
double nondimensionalize_gravity(double G, const ScaleFactors& s);

/// Closed octahedron with corners at (+-a,0,0), (0,+-b,0), (0,0,+-c).
RawBodyModel make_octahedron(double a, double b, double c, double density);

}  // namespace f2bp
