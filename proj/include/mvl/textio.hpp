#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mvl/aggregation.hpp"
#include "mvl/lattice.hpp"
#include "mvl/mvcm.hpp"
#include "mvl/mvset.hpp"
#include "mvl/term.hpp"

namespace mvl {

using LabelPairs = std::vector<std::pair<std::string, std::string>>;  // (element, confidence)

struct LatticeDecl {
  std::string name;
  std::optional<std::pair<std::string, std::string>> product;  // `lattice L = product A B`
  LatticeSpec spec;                                             // used when product is empty

  friend bool operator==(const LatticeDecl&, const LatticeDecl&) = default;
};

struct TermDecl {
  std::string name;
  std::vector<std::string> params;
  TermPtr body;

  /// Bodies compare structurally.
  friend bool operator==(const TermDecl& a, const TermDecl& b);
};

struct MVSetDecl {
  std::string name;
  std::string carrier;
  std::string scale;
  LabelPairs pairs;

  friend bool operator==(const MVSetDecl&, const MVSetDecl&) = default;
};

struct SetDecl {
  std::string name;
  std::string carrier;
  std::vector<std::string> elems;

  friend bool operator==(const SetDecl&, const SetDecl&) = default;
};

struct CellDecl {
  std::string from;
  std::string to;
  LabelPairs pairs;

  friend bool operator==(const CellDecl&, const CellDecl&) = default;
};

struct MatrixDecl {
  std::string name;
  std::vector<CellDecl> cells;

  friend bool operator==(const MatrixDecl&, const MatrixDecl&) = default;
};

struct MapDecl {
  std::string name;
  std::string carrier;
  std::string scale;
  std::vector<std::string> concepts;
  std::vector<std::pair<std::string, LabelPairs>> initial;
  std::vector<std::pair<std::string, LabelPairs>> feedback;
  std::vector<MatrixDecl> matrices;

  friend bool operator==(const MapDecl&, const MapDecl&) = default;
};

/// Syntax tree of one DSL file. Names are unique across all blocks.
struct Document {
  std::vector<LatticeDecl> lattices;
  std::vector<TermDecl> terms;
  std::vector<SetDecl> sets;
  std::vector<MVSetDecl> mvsets;
  std::vector<MapDecl> maps;

  bool empty() const;
};

bool operator==(const Document& a, const Document& b);

/// Parses the block DSL. Lattice names referenced by products, sets, mvsets
/// and maps must be declared somewhere in the file (forward references are
/// fine). Throws SyntaxError or UnresolvedReference.
Document parse(std::string_view text);

/// Canonical order: blocks grouped by kind and sorted by name, pairs sorted,
/// covers sorted by element position. Element, concept and matrix order are
/// significant and kept.
Document canonicalize(const Document& doc);

/// Canonical text: LF line endings, no trailing whitespace, deterministic.
std::string serialize(const Document& doc);

/// JSON export for other tools. Not read back.
std::string to_json(const Document& doc);

/// Semantic objects built from a document.
struct Model {
  std::map<std::string, LatticePtr> lattices;
  std::map<std::string, LatticeTerm> terms;
  std::map<std::string, AssessmentSet> sets;
  std::map<std::string, MVSet> mvsets;
  std::map<std::string, MapSpec> maps;

  const LatticePtr& lattice(const std::string& name) const;
  const LatticeTerm& term(const std::string& name) const;
  const AssessmentSet& set(const std::string& name) const;
  const MVSet& mvset(const std::string& name) const;
  const MapSpec& map(const std::string& name) const;
};

/// Builds and validates every block. Lattice errors carry the block name.
Model resolve(const Document& doc, const BuildOptions& options = BuildOptions::from_environment());

/// Built-in documents: L1, L2, L, M, hybrid-energy-map. Throws UnknownFixture.
Document load_fixture(std::string_view name);
std::string_view fixture_text(std::string_view name);
std::vector<std::string> fixture_names();

/// JSON rendering of a run trace.
std::string trace_to_json(const TraceTable& trace);

}  // namespace mvl
