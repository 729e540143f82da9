#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "mvl/error.hpp"
#include "mvl/textio.hpp"

namespace mvl {

namespace {

bool same_term(const TermPtr& a, const TermPtr& b) {
  if (!a || !b) return a == b;
  return structurally_equal(*a, *b);
}

template <typename T>
void sort_by_name(std::vector<T>& v) {
  std::stable_sort(v.begin(), v.end(), [](const T& a, const T& b) { return a.name < b.name; });
}

std::size_t position(const std::vector<std::string>& list, const std::string& item) {
  return static_cast<std::size_t>(std::find(list.begin(), list.end(), item) - list.begin());
}

std::string render_pairs(const LabelPairs& pairs) {
  std::string out = "{";
  for (const auto& [x, m] : pairs) out += " (" + x + ", " + m + ")";
  return out + (pairs.empty() ? "}" : " }");
}

// Top-level rendering leaves the outermost operator unparenthesised.
std::string render_term(const TermPtr& t) { return to_string(*t); }

}  // namespace

bool operator==(const TermDecl& a, const TermDecl& b) {
  return a.name == b.name && a.params == b.params && same_term(a.body, b.body);
}

bool operator==(const Document& a, const Document& b) {
  return a.lattices == b.lattices && a.terms == b.terms && a.sets == b.sets && a.mvsets == b.mvsets &&
         a.maps == b.maps;
}

Document canonicalize(const Document& doc) {
  Document out = doc;
  sort_by_name(out.lattices);
  sort_by_name(out.terms);
  sort_by_name(out.sets);
  sort_by_name(out.mvsets);
  sort_by_name(out.maps);

  for (auto& l : out.lattices) {
    if (l.product) continue;
    const auto& elems = l.spec.elements;
    auto key = [&](const std::pair<std::string, std::string>& c) {
      return std::make_tuple(position(elems, c.first), position(elems, c.second), c.first, c.second);
    };
    auto& covers = l.spec.covers;
    std::sort(covers.begin(), covers.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    covers.erase(std::unique(covers.begin(), covers.end()), covers.end());
    if (l.spec.mult && l.spec.mult->kind == MultSpec::Kind::Table) {
      auto& table = l.spec.mult->table;
      auto pkey = [&](const MultSpec::Product& p) {
        return std::make_tuple(position(elems, p.lhs), position(elems, p.rhs), p.lhs, p.rhs, p.result);
      };
      std::sort(table.begin(), table.end(), [&](const auto& a, const auto& b) { return pkey(a) < pkey(b); });
      table.erase(std::unique(table.begin(), table.end()), table.end());
    }
  }
  for (auto& s : out.sets) {
    std::sort(s.elems.begin(), s.elems.end());
    s.elems.erase(std::unique(s.elems.begin(), s.elems.end()), s.elems.end());
  }
  for (auto& s : out.mvsets) std::sort(s.pairs.begin(), s.pairs.end());
  for (auto& m : out.maps) {
    auto by_concept = [&](const auto& a, const auto& b) {
      return position(m.concepts, a.first) < position(m.concepts, b.first);
    };
    for (auto* entries : {&m.initial, &m.feedback}) {
      for (auto& e : *entries) std::sort(e.second.begin(), e.second.end());
      std::stable_sort(entries->begin(), entries->end(), by_concept);
    }
    for (auto& matrix : m.matrices) {
      for (auto& cell : matrix.cells) std::sort(cell.pairs.begin(), cell.pairs.end());
      std::stable_sort(matrix.cells.begin(), matrix.cells.end(), [&](const CellDecl& a, const CellDecl& b) {
        return std::make_pair(position(m.concepts, a.from), position(m.concepts, a.to)) <
               std::make_pair(position(m.concepts, b.from), position(m.concepts, b.to));
      });
    }
  }
  return out;
}

std::string serialize(const Document& input) {
  const Document doc = canonicalize(input);
  std::ostringstream out;
  bool first = true;
  auto block = [&]() {
    if (!first) out << '\n';
    first = false;
  };

  for (const auto& l : doc.lattices) {
    block();
    if (l.product) {
      out << "lattice " << l.name << " = product " << l.product->first << ' ' << l.product->second << '\n';
      continue;
    }
    out << "lattice " << l.name << " {\n  elems";
    for (const auto& e : l.spec.elements) out << ' ' << e;
    out << '\n';
    if (!l.spec.covers.empty()) {
      out << "  covers";
      for (const auto& [lo, hi] : l.spec.covers) out << ' ' << lo << '<' << hi;
      out << '\n';
    }
    if (l.spec.mult) {
      if (l.spec.mult->kind == MultSpec::Kind::Meet) {
        out << "  mult meet\n";
      } else {
        if (!l.spec.mult->unit.empty()) out << "  unit " << l.spec.mult->unit << '\n';
        for (const auto& p : l.spec.mult->table) out << "  mul " << p.lhs << ' ' << p.rhs << " = " << p.result << '\n';
      }
    }
    out << "}\n";
  }
  for (const auto& t : doc.terms) {
    block();
    out << "term " << t.name << '(';
    for (std::size_t i = 0; i < t.params.size(); ++i) out << (i ? ", " : "") << t.params[i];
    out << ") = " << render_term(t.body) << '\n';
  }
  for (const auto& s : doc.sets) {
    block();
    out << "set " << s.name << " over " << s.carrier << " {";
    for (const auto& e : s.elems) out << ' ' << e;
    out << (s.elems.empty() ? "}\n" : " }\n");
  }
  for (const auto& s : doc.mvsets) {
    block();
    out << "mvset " << s.name << " over " << s.carrier << ' ' << s.scale << ' ' << render_pairs(s.pairs) << '\n';
  }
  for (const auto& m : doc.maps) {
    block();
    out << "map " << m.name << " over " << m.carrier << ' ' << m.scale << " {\n  concepts";
    for (const auto& c : m.concepts) out << ' ' << c;
    out << '\n';
    for (const auto& [c, pairs] : m.initial) out << "  initial " << c << " = " << render_pairs(pairs) << '\n';
    for (const auto& [c, pairs] : m.feedback) out << "  feedback " << c << " = " << render_pairs(pairs) << '\n';
    for (const auto& matrix : m.matrices) {
      out << "  matrix " << matrix.name << " {\n";
      for (const auto& cell : matrix.cells)
        out << "    " << cell.from << " -> " << cell.to << " : " << render_pairs(cell.pairs) << '\n';
      out << "  }\n";
    }
    out << "}\n";
  }
  return out.str();
}

std::string to_json(const Document& input) {
  const Document doc = canonicalize(input);
  using nlohmann::json;
  auto pairs_json = [](const LabelPairs& pairs) {
    json arr = json::array();
    for (const auto& [x, m] : pairs) arr.push_back({{"element", x}, {"confidence", m}});
    return arr;
  };
  json j;
  j["lattices"] = json::array();
  for (const auto& l : doc.lattices) {
    json o{{"name", l.name}};
    if (l.product) {
      o["product"] = {l.product->first, l.product->second};
    } else {
      o["elements"] = l.spec.elements;
      json covers = json::array();
      for (const auto& [lo, hi] : l.spec.covers) covers.push_back({lo, hi});
      o["covers"] = covers;
      if (l.spec.mult) {
        if (l.spec.mult->kind == MultSpec::Kind::Meet) {
          o["mult"] = "meet";
        } else {
          json table = json::array();
          for (const auto& p : l.spec.mult->table) table.push_back({p.lhs, p.rhs, p.result});
          o["mult"] = {{"unit", l.spec.mult->unit}, {"table", table}};
        }
      }
    }
    j["lattices"].push_back(o);
  }
  j["terms"] = json::array();
  for (const auto& t : doc.terms) j["terms"].push_back({{"name", t.name}, {"params", t.params}, {"body", render_term(t.body)}});
  j["sets"] = json::array();
  for (const auto& s : doc.sets) j["sets"].push_back({{"name", s.name}, {"carrier", s.carrier}, {"elements", s.elems}});
  j["mvsets"] = json::array();
  for (const auto& s : doc.mvsets)
    j["mvsets"].push_back({{"name", s.name}, {"carrier", s.carrier}, {"scale", s.scale}, {"pairs", pairs_json(s.pairs)}});
  j["maps"] = json::array();
  for (const auto& m : doc.maps) {
    json o{{"name", m.name}, {"carrier", m.carrier}, {"scale", m.scale}, {"concepts", m.concepts}};
    json initial = json::object();
    for (const auto& [c, pairs] : m.initial) initial[c] = pairs_json(pairs);
    o["initial"] = initial;
    json feedback = json::object();
    for (const auto& [c, pairs] : m.feedback) feedback[c] = pairs_json(pairs);
    o["feedback"] = feedback;
    json matrices = json::array();
    for (const auto& matrix : m.matrices) {
      json cells = json::array();
      for (const auto& cell : matrix.cells)
        cells.push_back({{"from", cell.from}, {"to", cell.to}, {"pairs", pairs_json(cell.pairs)}});
      matrices.push_back({{"name", matrix.name}, {"cells", cells}});
    }
    o["matrices"] = matrices;
    j["maps"].push_back(o);
  }
  return j.dump(2) + "\n";
}

std::string trace_to_json(const TraceTable& trace) {
  using nlohmann::json;
  auto set_json = [](const MVSet& s) {
    json arr = json::array();
    for (const auto& [x, m] : s.entries()) arr.push_back({s.carrier().label(x), s.scale().label(m)});
    return arr;
  };
  json rows = json::array();
  for (const auto& r : trace.rows) {
    json o{{"k", r.k}, {"branch", r.branch}, {"concept", trace.concepts.at(r.concept_index)}, {"value", set_json(r.value)}};
    if (r.f) o["f"] = set_json(*r.f);
    if (r.r) o["r"] = set_json(*r.r);
    if (r.c) o["c"] = set_json(*r.c);
    if (r.corrected) o["loop_correction"] = true;
    rows.push_back(o);
  }
  return json{{"concepts", trace.concepts}, {"rows", rows}}.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Resolution

namespace {

[[noreturn]] void rethrow_in(const Error& e, const std::string& where) {
  throw Error(e.code(), where + ": " + e.detail());
}

template <typename T>
const T& lookup(const std::map<std::string, T>& m, const std::string& name, std::string_view kind) {
  auto it = m.find(name);
  if (it == m.end()) throw Error(ErrorCode::UnresolvedReference, "no " + std::string(kind) + " named '" + name + "'");
  return it->second;
}

MVSet resolve_pairs(const LabelPairs& pairs, const LatticePtr& carrier, const LatticePtr& scale) {
  MVSet s(carrier, scale);
  for (const auto& [x, m] : pairs) s.add(carrier->at(x), scale->at(m));
  return s;
}

}  // namespace

const LatticePtr& Model::lattice(const std::string& name) const { return lookup(lattices, name, "lattice"); }
const LatticeTerm& Model::term(const std::string& name) const { return lookup(terms, name, "term"); }
const AssessmentSet& Model::set(const std::string& name) const { return lookup(sets, name, "set"); }
const MVSet& Model::mvset(const std::string& name) const { return lookup(mvsets, name, "mvset"); }
const MapSpec& Model::map(const std::string& name) const { return lookup(maps, name, "map"); }

Model resolve(const Document& doc, const BuildOptions& options) {
  Model model;
  std::map<std::string, const LatticeDecl*> decls;
  for (const auto& l : doc.lattices) decls[l.name] = &l;
  std::set<std::string> building;

  std::function<LatticePtr(const std::string&)> build = [&](const std::string& name) -> LatticePtr {
    if (auto it = model.lattices.find(name); it != model.lattices.end()) return it->second;
    auto d = decls.find(name);
    if (d == decls.end()) throw Error(ErrorCode::UnresolvedReference, "no lattice named '" + name + "'");
    if (!building.insert(name).second)
      throw Error(ErrorCode::UnresolvedReference, "lattice '" + name + "' is defined in terms of itself");
    LatticePtr built;
    const LatticeDecl& decl = *d->second;
    if (decl.product) {
      LatticePtr a = build(decl.product->first);
      LatticePtr b = build(decl.product->second);
      try {
        built = std::make_shared<const Lattice>(Lattice::product(*a, *b, options));
      } catch (const Error& e) {
        rethrow_in(e, "lattice '" + name + "'");
      }
    } else {
      try {
        built = std::make_shared<const Lattice>(Lattice::build(decl.spec, options));
      } catch (const Error& e) {
        rethrow_in(e, "lattice '" + name + "'");
      }
    }
    building.erase(name);
    model.lattices[name] = built;
    return built;
  };
  for (const auto& l : doc.lattices) build(l.name);

  for (const auto& t : doc.terms) {
    try {
      model.terms.emplace(t.name, LatticeTerm(t.params, t.body));
    } catch (const Error& e) {
      rethrow_in(e, "term '" + t.name + "'");
    }
  }
  for (const auto& s : doc.sets) {
    try {
      const LatticePtr& l = model.lattice(s.carrier);
      std::vector<Element> elems;
      for (const auto& label : s.elems) elems.push_back(l->at(label));
      model.sets.emplace(s.name, AssessmentSet(l, std::move(elems)));
    } catch (const Error& e) {
      rethrow_in(e, "set '" + s.name + "'");
    }
  }
  for (const auto& s : doc.mvsets) {
    try {
      model.mvsets.emplace(s.name, resolve_pairs(s.pairs, model.lattice(s.carrier), model.lattice(s.scale)));
    } catch (const Error& e) {
      rethrow_in(e, "mvset '" + s.name + "'");
    }
  }
  for (const auto& m : doc.maps) {
    try {
      const LatticePtr& carrier = model.lattice(m.carrier);
      const LatticePtr& scale = model.lattice(m.scale);
      const std::size_t n = m.concepts.size();
      auto index_of = [&](const std::string& c) { return position(m.concepts, c); };

      std::vector<std::optional<MVSet>> initial(n);
      for (const auto& [c, pairs] : m.initial) {
        auto& slot = initial[index_of(c)];
        if (slot) throw Error(ErrorCode::InvalidSpec, "two initial values for '" + c + "'");
        slot = resolve_pairs(pairs, carrier, scale);
      }
      std::vector<MVSet> init;
      for (std::size_t i = 0; i < n; ++i) {
        if (!initial[i]) throw Error(ErrorCode::InvalidSpec, "no initial value for '" + m.concepts[i] + "'");
        init.push_back(*initial[i]);
      }

      std::vector<MVSet> feedback;
      if (!m.feedback.empty()) {
        feedback.assign(n, MVSet(carrier, scale));
        for (const auto& [c, pairs] : m.feedback) feedback[index_of(c)] = resolve_pairs(pairs, carrier, scale);
      }

      std::vector<WeightMatrix> matrices;
      std::set<std::string> matrix_names;
      for (const auto& md : m.matrices) {
        if (!matrix_names.insert(md.name).second)
          throw Error(ErrorCode::InvalidSpec, "duplicate matrix '" + md.name + "'");
        WeightMatrix wm;
        wm.name = md.name;
        wm.cells.assign(n * n, MVSet(carrier, scale));
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (const auto& cell : md.cells) {
          std::size_t j = index_of(cell.from);
          std::size_t i = index_of(cell.to);
          if (!seen.emplace(j, i).second)
            throw Error(ErrorCode::InvalidSpec,
                        "matrix '" + md.name + "' lists " + cell.from + " -> " + cell.to + " twice");
          wm.cells[j * n + i] = resolve_pairs(cell.pairs, carrier, scale);
        }
        matrices.push_back(std::move(wm));
      }
      model.maps.emplace(m.name, MapSpec(carrier, scale, m.concepts, std::move(init), std::move(matrices),
                                         std::move(feedback)));
    } catch (const Error& e) {
      rethrow_in(e, "map '" + m.name + "'");
    }
  }
  return model;
}

}  // namespace mvl
