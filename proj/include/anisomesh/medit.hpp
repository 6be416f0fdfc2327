#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anisomesh/mesh.hpp"
#include "anisomesh/metric.hpp"

// ASCII MEDIT subset: MeshVersionFormatted, Dimension 2, Vertices,
// Triangles, optional Edges (boundary tags), End. Indices are 1-based.

namespace anisomesh {

/// Parses a mesh. Unknown sections are skipped; a message for each is
/// appended to warnings when given. Throws ParseError or UnsupportedDimension.
TriMesh read_medit(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Writes coordinates with 17 significant digits so a read returns them
/// bit-exactly.
std::string write_medit(const TriMesh& mesh);

enum class SolType : int { scalar = 1, vector = 2, sym_tensor = 3 };

struct SolData {
  SolType type = SolType::scalar;
  Index count = 0;
  /// count * components values, vertex-major.
  std::vector<double> values;
};

std::string write_sol(std::span<const double> scalars);
std::string write_sol(const NodalTensorField& tensors);
SolData read_sol(std::string_view text);

/// Unpacks a SolType::sym_tensor payload.
NodalTensorField tensor_field_from_sol(const SolData& sol);

}  // namespace anisomesh
