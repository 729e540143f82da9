#include "mvl/mvl.h"

#include <cstdlib>
#include <cstring>
#include <set>
#include <sstream>

#include "mvl/error.hpp"
#include "mvl/textio.hpp"

struct mvl_document {
  mvl::Document doc;
  mvl::Model model;
};

struct mvl_lattice {
  mvl::LatticePtr lattice;
};

namespace {

thread_local std::string last_error;

mvl_status fail(mvl_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
mvl_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return MVL_OK;
  } catch (const mvl::Error& e) {
    return fail(static_cast<mvl_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MVL_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MVL_E_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw mvl::Error(mvl::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

mvl::Element element(const mvl_lattice* l, mvl_element e) {
  mvl::Element x{e};
  l->lattice->check(x);
  return x;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string braced(const mvl::MVSet& s) {
  return s.empty() ? "{}" : "{ " + mvl::to_string(s) + " }";
}

const mvl::LatticePtr& pick_lattice(const mvl_document* doc, const char* name) {
  if (name && *name) return doc->model.lattice(name);
  if (doc->doc.lattices.empty()) throw mvl::Error(mvl::ErrorCode::UnresolvedReference, "document declares no lattice");
  // The last lattice that no product is built from.
  std::set<std::string> parts;
  for (const auto& l : doc->doc.lattices)
    if (l.product) parts.insert({l.product->first, l.product->second});
  for (auto it = doc->doc.lattices.rbegin(); it != doc->doc.lattices.rend(); ++it)
    if (!parts.count(it->name)) return doc->model.lattice(it->name);
  return doc->model.lattice(doc->doc.lattices.back().name);
}

}  // namespace

extern "C" {

MVL_API const char* mvl_status_name(mvl_status status) {
  switch (status) {
    case MVL_OK: return "Ok";
    case MVL_E_INTERNAL: return "InternalError";
    default: break;
  }
  if (status >= MVL_E_NOT_A_LATTICE && status <= MVL_E_INVALID_ARGUMENT)
    return mvl::error_name(static_cast<mvl::ErrorCode>(status)).data();
  return "UnknownStatus";
}

MVL_API const char* mvl_last_error(void) { return last_error.c_str(); }

MVL_API void mvl_string_free(char* s) { std::free(s); }

MVL_API void mvl_run_options_init(mvl_run_options* options) {
  if (!options) return;
  options->combine = MVL_COMBINE_JOIN;
  options->weights = MVL_WEIGHTS_SINGLE;
  options->matrix = 0;
  options->max_iter = 100;
  options->branch_depth = 4;
  options->format = MVL_FORMAT_TSV;
}

MVL_API mvl_status mvl_document_parse(const char* text, size_t length, mvl_document** out) {
  return guarded([&] {
    require(out, "output handle");
    *out = nullptr;
    if (!text && length) require(text, "text");
    auto doc = std::make_unique<mvl_document>();
    doc->doc = mvl::parse(std::string_view(text ? text : "", length));
    doc->model = mvl::resolve(doc->doc);
    *out = doc.release();
  });
}

MVL_API mvl_status mvl_document_load_fixture(const char* name, mvl_document** out) {
  return guarded([&] {
    require(name, "fixture name");
    require(out, "output handle");
    *out = nullptr;
    auto doc = std::make_unique<mvl_document>();
    doc->doc = mvl::load_fixture(name);
    doc->model = mvl::resolve(doc->doc);
    *out = doc.release();
  });
}

MVL_API void mvl_document_free(mvl_document* doc) { delete doc; }

MVL_API mvl_status mvl_document_serialize(const mvl_document* doc, char** out) {
  return guarded([&] {
    require(doc, "document");
    require(out, "output");
    *out = dup(mvl::serialize(doc->doc));
  });
}

MVL_API mvl_status mvl_document_to_json(const mvl_document* doc, char** out) {
  return guarded([&] {
    require(doc, "document");
    require(out, "output");
    *out = dup(mvl::to_json(doc->doc));
  });
}

MVL_API mvl_status mvl_document_names(const mvl_document* doc, const char* kind, char** out) {
  return guarded([&] {
    require(doc, "document");
    require(kind, "kind");
    require(out, "output");
    std::string names;
    auto add = [&](const auto& blocks) {
      for (const auto& b : blocks) names += b.name + "\n";
    };
    std::string_view k(kind);
    if (k == "lattice") add(doc->doc.lattices);
    else if (k == "term") add(doc->doc.terms);
    else if (k == "set") add(doc->doc.sets);
    else if (k == "mvset") add(doc->doc.mvsets);
    else if (k == "map") add(doc->doc.maps);
    else throw mvl::Error(mvl::ErrorCode::InvalidArgument, "unknown block kind '" + std::string(k) + "'");
    *out = dup(names);
  });
}

MVL_API mvl_status mvl_fixture_names(char** out) {
  return guarded([&] {
    require(out, "output");
    std::string names;
    for (const auto& n : mvl::fixture_names()) names += n + "\n";
    *out = dup(names);
  });
}

MVL_API mvl_status mvl_document_lattice(const mvl_document* doc, const char* name, mvl_lattice** out) {
  return guarded([&] {
    require(doc, "document");
    require(out, "output handle");
    *out = new mvl_lattice{pick_lattice(doc, name)};
  });
}

MVL_API void mvl_lattice_free(mvl_lattice* l) { delete l; }

MVL_API size_t mvl_lattice_size(const mvl_lattice* l) { return l ? l->lattice->size() : 0; }

MVL_API const char* mvl_lattice_label(const mvl_lattice* l, mvl_element e) {
  if (!l || e >= l->lattice->size()) return nullptr;
  return l->lattice->label(mvl::Element{e}).c_str();
}

MVL_API mvl_status mvl_lattice_find(const mvl_lattice* l, const char* label, mvl_element* out) {
  return guarded([&] {
    require(l, "lattice");
    require(label, "label");
    require(out, "output");
    *out = l->lattice->at(label).id;
  });
}

MVL_API mvl_element mvl_lattice_top(const mvl_lattice* l) { return l ? l->lattice->top().id : 0; }

MVL_API mvl_element mvl_lattice_bottom(const mvl_lattice* l) { return l ? l->lattice->bottom().id : 0; }

MVL_API mvl_status mvl_lattice_leq(const mvl_lattice* l, mvl_element a, mvl_element b, int* out) {
  return guarded([&] {
    require(l, "lattice");
    require(out, "output");
    *out = l->lattice->leq(element(l, a), element(l, b)) ? 1 : 0;
  });
}

#define MVL_BINARY(fn, method)                                                              \
  MVL_API mvl_status fn(const mvl_lattice* l, mvl_element a, mvl_element b, mvl_element* out) { \
    return guarded([&] {                                                                    \
      require(l, "lattice");                                                                \
      require(out, "output");                                                               \
      *out = l->lattice->method(element(l, a), element(l, b)).id;                           \
    });                                                                                     \
  }

MVL_BINARY(mvl_lattice_join, join)
MVL_BINARY(mvl_lattice_meet, meet)
MVL_BINARY(mvl_lattice_implies, heyting_implies)
MVL_BINARY(mvl_lattice_ring_sum, ring_sum)
MVL_BINARY(mvl_lattice_set_difference, set_difference)

#undef MVL_BINARY

MVL_API mvl_status mvl_lattice_residuals(const mvl_lattice* l, mvl_element a, mvl_element b, mvl_element* right,
                                         mvl_element* left) {
  return guarded([&] {
    require(l, "lattice");
    require(right, "output");
    require(left, "output");
    auto [r, lft] = l->lattice->residuals(element(l, a), element(l, b));
    *right = r.id;
    *left = lft.id;
  });
}

MVL_API mvl_status mvl_lattice_report(const mvl_lattice* l, char** out) {
  return guarded([&] {
    require(l, "lattice");
    require(out, "output");
    const mvl::Lattice& lat = *l->lattice;
    auto labels = [&](const std::vector<mvl::Element>& es) {
      std::string s;
      for (auto e : es) s += (s.empty() ? "" : " ") + lat.label(e);
      return s;
    };
    std::ostringstream os;
    os << "elements\t" << lat.size() << '\n'
       << "top\t" << lat.label(lat.top()) << '\n'
       << "bottom\t" << lat.label(lat.bottom()) << '\n'
       << "atoms\t" << labels(lat.atoms()) << '\n'
       << "generators\t" << labels(lat.generators()) << '\n'
       << "distributive\t" << yes_no(lat.is_distributive()) << '\n'
       << "atomic\t" << yes_no(lat.is_atomic()) << '\n'
       << "atomistic\t" << yes_no(lat.is_atomistic()) << '\n'
       << "boolean\t" << yes_no(lat.is_boolean()) << '\n'
       << "brouwer\t" << yes_no(lat.is_brouwer()) << '\n'
       << "multiplication\t" << (!lat.has_mult() ? "none" : lat.mult_is_meet() ? "meet" : "table") << '\n'
       << "residuated\t" << yes_no(lat.is_residuated()) << '\n'
       << "integrally closed\t" << yes_no(lat.is_residuated() && lat.is_integrally_closed()) << '\n'
       << "integral\t" << yes_no(lat.has_mult() && lat.is_integral()) << '\n';
    *out = dup(os.str());
  });
}

MVL_API mvl_status mvl_lattice_show(const mvl_lattice* l, char** out) {
  return guarded([&] {
    require(l, "lattice");
    require(out, "output");
    const mvl::Lattice& lat = *l->lattice;
    const auto elems = lat.elements();
    std::ostringstream os;
    os << "element\theight\tcovers\n";
    for (auto a : elems) {
      std::string covers;
      for (auto b : elems) {
        if (a == b || !lat.leq(a, b)) continue;
        bool direct = true;
        for (auto c : elems) {
          if (c != a && c != b && lat.leq(a, c) && lat.leq(c, b)) {
            direct = false;
            break;
          }
        }
        if (direct) covers += (covers.empty() ? "" : " ") + lat.label(b);
      }
      os << lat.label(a) << '\t' << lat.height(a) << '\t' << (covers.empty() ? "-" : covers) << '\n';
    }
    *out = dup(os.str());
  });
}

MVL_API mvl_status mvl_eval(const mvl_document* doc, const char* term, const char* lattice, const char* bindings,
                            char** out) {
  return guarded([&] {
    require(doc, "document");
    require(term, "term name");
    require(out, "output");
    const mvl::LatticeTerm& t = doc->model.term(term);
    const mvl::Lattice& lat = *pick_lattice(doc, lattice);
    mvl::Valuation v;
    std::stringstream ss(bindings ? bindings : "");
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0)
        throw mvl::Error(mvl::ErrorCode::InvalidArgument, "binding '" + item + "' is not of the form name=label");
      v[item.substr(0, eq)] = lat.at(item.substr(eq + 1));
    }
    *out = dup(lat.label(t.eval(lat, v)));
  });
}

MVL_API mvl_status mvl_extend(const mvl_document* doc, const char* term, const char* const* mvsets, size_t count,
                              int classical, char** out) {
  return guarded([&] {
    require(doc, "document");
    require(term, "term name");
    require(out, "output");
    if (count) require(mvsets, "mvset names");
    std::vector<mvl::MVSet> args;
    for (size_t i = 0; i < count; ++i) {
      require(mvsets[i], "mvset name");
      args.push_back(doc->model.mvset(mvsets[i]));
    }
    const mvl::LatticeTerm& t = doc->model.term(term);
    *out = dup(braced(classical ? mvl::classical_extend(t, args) : mvl::extend(t, args)));
  });
}

MVL_API mvl_status mvl_mean(const mvl_document* doc, mvl_mean_kind kind, const char* const* sets, size_t count,
                            char** out) {
  return guarded([&] {
    require(doc, "document");
    require(out, "output");
    if (count) require(sets, "set names");
    std::vector<mvl::AssessmentSet> args;
    for (size_t i = 0; i < count; ++i) {
      require(sets[i], "set name");
      args.push_back(doc->model.set(sets[i]));
    }
    auto k = kind == MVL_MEAN_OPTIMISTIC ? mvl::MeanKind::Optimistic : mvl::MeanKind::Pessimistic;
    *out = dup(mvl::to_string(mvl::nary_mean(k, args)));
  });
}

MVL_API mvl_status mvl_diff(const mvl_document* doc, const char* a, const char* b, char** out) {
  return guarded([&] {
    require(doc, "document");
    require(a, "set name");
    require(b, "set name");
    require(out, "output");
    *out = dup(mvl::to_string(mvl::difference(doc->model.set(a), doc->model.set(b))));
  });
}

MVL_API mvl_status mvl_map_run(const mvl_document* doc, const char* map, const mvl_run_options* options,
                               char** trace, char** status) {
  bool converged = true;
  std::string message;
  mvl_status st = guarded([&] {
    require(doc, "document");
    require(options, "options");
    require(trace, "trace output");
    require(status, "status output");
    const mvl::MapSpec* spec = nullptr;
    if (map && *map) {
      spec = &doc->model.map(map);
    } else {
      if (doc->doc.maps.empty()) throw mvl::Error(mvl::ErrorCode::UnresolvedReference, "document declares no map");
      spec = &doc->model.map(doc->doc.maps.front().name);
    }
    mvl::RunOptions ro;
    ro.combine = options->combine == MVL_COMBINE_SUM ? mvl::Combine::Sum : mvl::Combine::Join;
    switch (options->weights) {
      case MVL_WEIGHTS_SINGLE: ro.mode = mvl::WeightMode::Single; break;
      case MVL_WEIGHTS_ENUMERATE: ro.mode = mvl::WeightMode::Enumerate; break;
      case MVL_WEIGHTS_PESSIMISTIC: ro.mode = mvl::WeightMode::Pessimistic; break;
      case MVL_WEIGHTS_OPTIMISTIC: ro.mode = mvl::WeightMode::Optimistic; break;
      default: throw mvl::Error(mvl::ErrorCode::InvalidArgument, "unknown weight mode");
    }
    ro.matrix = options->matrix;
    ro.max_iter = options->max_iter;
    ro.branch_depth = options->branch_depth;
    mvl::RunResult result = mvl::run(*spec, ro);
    std::string text;
    switch (options->format) {
      case MVL_FORMAT_TSV: text = mvl::render_trace(result.trace, mvl::TraceFormat::Tsv); break;
      case MVL_FORMAT_MARKDOWN: text = mvl::render_trace(result.trace, mvl::TraceFormat::Markdown); break;
      case MVL_FORMAT_JSON: text = mvl::trace_to_json(result.trace); break;
      default: throw mvl::Error(mvl::ErrorCode::InvalidArgument, "unknown output format");
    }
    message = result.status();
    converged = result.converged;
    *trace = dup(text);
    *status = dup(message);
  });
  if (st == MVL_OK && !converged)
    return fail(MVL_E_NOT_CONVERGED, message);  // already prefixed with the error name
  return st;
}

}  // extern "C"
