#include "anisomesh/medit.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "anisomesh/errors.hpp"

namespace anisomesh {

namespace {

/// Whitespace tokenizer that tracks line numbers and skips '#' comments.
class Tokens {
 public:
  explicit Tokens(std::string_view text) : text_(text) {}

  bool next(std::string_view& tok) {
    skip();
    if (pos_ >= text_.size()) return false;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
    tok = text_.substr(start, pos_ - start);
    tok_line_ = line_;
    return true;
  }

  std::string_view expect(const char* what) {
    std::string_view tok;
    if (!next(tok)) throw ParseError(line_, std::string("unexpected end of file, expected ") + what);
    return tok;
  }

  long long integer(const char* what) {
    const auto tok = expect(what);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw ParseError(tok_line_, std::string("expected ") + what + ", got '" + std::string(tok) + "'");
    }
    return v;
  }

  double real(const char* what) {
    const std::string tok(expect(what));
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || errno == ERANGE) {
      throw ParseError(tok_line_, std::string("expected ") + what + ", got '" + tok + "'");
    }
    return v;
  }

  /// Remaining tokens on the current line.
  std::vector<std::string_view> rest_of_line() {
    std::vector<std::string_view> out;
    while (true) {
      while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
      if (pos_ >= text_.size() || text_[pos_] == '\n' || text_[pos_] == '#') break;
      std::string_view tok;
      next(tok);
      out.push_back(tok);
    }
    return out;
  }

  std::size_t line() const { return tok_line_; }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (is_space(c)) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t tok_line_ = 1;
};

void append_real(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

Index checked_count(Tokens& tok, const char* what) {
  const long long n = tok.integer(what);
  if (n < 0 || n > (1LL << 30)) throw ParseError(tok.line(), std::string("bad ") + what);
  return static_cast<Index>(n);
}

Index checked_vertex(Tokens& tok, Index nv) {
  const long long v = tok.integer("vertex index");
  if (v < 1 || v > nv) throw ParseError(tok.line(), "vertex index " + std::to_string(v) + " out of range");
  return static_cast<Index>(v - 1);
}

void read_header_value(Tokens& tok, std::string_view key) {
  if (key == "Dimension") {
    const long long dim = tok.integer("dimension");
    if (dim != 2) throw UnsupportedDimension("only 2D meshes are supported, file has Dimension " + std::to_string(dim));
  } else {
    (void)tok.integer("format version");
  }
}

}  // namespace

TriMesh read_medit(std::string_view text, std::vector<std::string>* warnings) {
  Tokens tok(text);
  std::vector<Vec2> vertices;
  std::vector<Triangle> triangles;
  std::vector<BoundaryEdge> edges;
  bool have_vertices = false, have_dimension = false, ended = false;

  std::string_view key;
  while (!ended && tok.next(key)) {
    if (key == "MeshVersionFormatted") {
      read_header_value(tok, key);
    } else if (key == "Dimension") {
      read_header_value(tok, key);
      have_dimension = true;
    } else if (key == "Vertices") {
      const Index n = checked_count(tok, "vertex count");
      vertices.resize(n);
      for (Index i = 0; i < n; ++i) {
        vertices[i].x = tok.real("x coordinate");
        vertices[i].y = tok.real("y coordinate");
        (void)tok.integer("vertex reference");
      }
      have_vertices = true;
    } else if (key == "Triangles") {
      if (!have_vertices) throw ParseError(tok.line(), "Triangles before Vertices");
      const Index n = checked_count(tok, "triangle count");
      const auto nv = static_cast<Index>(vertices.size());
      triangles.resize(n);
      for (Index i = 0; i < n; ++i) {
        for (Index& v : triangles[i]) v = checked_vertex(tok, nv);
        (void)tok.integer("triangle reference");
      }
    } else if (key == "Edges") {
      if (!have_vertices) throw ParseError(tok.line(), "Edges before Vertices");
      const Index n = checked_count(tok, "edge count");
      const auto nv = static_cast<Index>(vertices.size());
      edges.resize(n);
      for (Index i = 0; i < n; ++i) {
        edges[i].v[0] = checked_vertex(tok, nv);
        edges[i].v[1] = checked_vertex(tok, nv);
        edges[i].tag = static_cast<int>(tok.integer("edge reference"));
      }
    } else if (key == "End") {
      ended = true;
    } else {
      // Unknown section: a count followed by that many lines.
      const std::size_t at = tok.line();
      const auto rest = tok.rest_of_line();
      long long n = 0;
      bool counted = false;
      if (rest.empty()) {
        n = tok.integer("section size");
        counted = true;
      } else {
        auto [p, ec] = std::from_chars(rest[0].data(), rest[0].data() + rest[0].size(), n);
        counted = ec == std::errc() && rest.size() == 1;
      }
      if (counted) {
        (void)tok.rest_of_line();
        for (long long i = 0; i < n; ++i) {
          std::string_view first;
          if (!tok.next(first)) throw ParseError(tok.line(), "truncated section " + std::string(key));
          (void)tok.rest_of_line();
        }
      }
      if (warnings) warnings->push_back("line " + std::to_string(at) + ": skipped section " + std::string(key));
    }
  }
  if (!have_dimension) throw ParseError(tok.line(), "missing Dimension");
  if (!have_vertices) throw ParseError(tok.line(), "missing Vertices section");
  if (triangles.empty()) throw ParseError(tok.line(), "missing Triangles section");
  return build_mesh(std::move(vertices), std::move(triangles), std::move(edges));
}

std::string write_medit(const TriMesh& mesh) {
  std::string out = "MeshVersionFormatted 2\n\nDimension 2\n\nVertices\n";
  out += std::to_string(mesh.num_vertices()) + "\n";
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    const Vec2 p = mesh.vertex(v);
    append_real(out, p.x);
    out += ' ';
    append_real(out, p.y);
    int ref = 0;
    if (const auto mask = mesh.vertex_tags(v); mask != 0) ref = __builtin_ctz(mask);
    out += ' ' + std::to_string(ref) + '\n';
  }
  out += "\nTriangles\n" + std::to_string(mesh.num_triangles()) + "\n";
  for (const auto& t : mesh.triangles()) {
    out += std::to_string(t[0] + 1) + ' ' + std::to_string(t[1] + 1) + ' ' + std::to_string(t[2] + 1) + " 0\n";
  }
  const auto bnd = mesh.boundary_edges();
  out += "\nEdges\n" + std::to_string(bnd.size()) + "\n";
  for (const auto& e : bnd) {
    out += std::to_string(e.v[0] + 1) + ' ' + std::to_string(e.v[1] + 1) + ' ' + std::to_string(e.tag) + '\n';
  }
  out += "\nEnd\n";
  return out;
}

namespace {

std::string sol_header(std::size_t count, SolType type) {
  return "MeshVersionFormatted 2\n\nDimension 2\n\nSolAtVertices\n" + std::to_string(count) + "\n1 " +
         std::to_string(static_cast<int>(type)) + "\n";
}

}  // namespace

std::string write_sol(std::span<const double> scalars) {
  std::string out = sol_header(scalars.size(), SolType::scalar);
  for (double v : scalars) {
    append_real(out, v);
    out += '\n';
  }
  out += "\nEnd\n";
  return out;
}

std::string write_sol(const NodalTensorField& tensors) {
  std::string out = sol_header(tensors.size(), SolType::sym_tensor);
  for (const auto& t : tensors.values) {
    append_real(out, t.a11);
    out += ' ';
    append_real(out, t.a12);
    out += ' ';
    append_real(out, t.a22);
    out += '\n';
  }
  out += "\nEnd\n";
  return out;
}

SolData read_sol(std::string_view text) {
  Tokens tok(text);
  SolData sol;
  bool have_dimension = false, have_data = false;
  std::string_view key;
  while (tok.next(key)) {
    if (key == "MeshVersionFormatted") {
      read_header_value(tok, key);
    } else if (key == "Dimension") {
      read_header_value(tok, key);
      have_dimension = true;
    } else if (key == "SolAtVertices") {
      sol.count = checked_count(tok, "solution count");
      const long long nfields = tok.integer("field count");
      auto rest = tok.rest_of_line();
      long long type = nfields;
      if (!rest.empty()) {
        if (nfields != 1 || rest.size() != 1) throw ParseError(tok.line(), "only one field per file is supported");
        std::from_chars(rest[0].data(), rest[0].data() + rest[0].size(), type);
      }
      if (type < 1 || type > 3) throw ParseError(tok.line(), "unknown solution type " + std::to_string(type));
      sol.type = static_cast<SolType>(type);
      const int comps = type == 1 ? 1 : type == 2 ? 2 : 3;
      sol.values.resize(static_cast<std::size_t>(sol.count) * comps);
      for (double& v : sol.values) v = tok.real("solution value");
      have_data = true;
    } else if (key == "End") {
      break;
    } else {
      throw ParseError(tok.line(), "unexpected keyword '" + std::string(key) + "'");
    }
  }
  if (!have_dimension) throw ParseError(tok.line(), "missing Dimension");
  if (!have_data) throw ParseError(tok.line(), "missing SolAtVertices");
  return sol;
}

NodalTensorField tensor_field_from_sol(const SolData& sol) {
  if (sol.type != SolType::sym_tensor) throw ValidationError("solution file does not hold symmetric tensors");
  NodalTensorField f;
  f.role = TensorRole::metric;
  f.values.resize(sol.count);
  for (Index i = 0; i < sol.count; ++i) {
    f.values[i] = {sol.values[3 * i], sol.values[3 * i + 1], sol.values[3 * i + 2]};
  }
  return f;
}

}  // namespace anisomesh
