#include "mvl/mvcm.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "mvl/error.hpp"

namespace mvl {

namespace {

// Collects named MVSet arguments for one extend() call; a name added twice
// refers to the same variable.
class TermArgs {
 public:
  TermPtr add(const std::string& name, const MVSet& value) {
    if (std::find(params_.begin(), params_.end(), name) == params_.end()) {
      params_.push_back(name);
      args_.push_back(value);
    }
    return var(name);
  }
  bool has(const std::string& name) const {
    return std::find(params_.begin(), params_.end(), name) != params_.end();
  }
  MVSet apply(const TermPtr& body) const { return extend(LatticeTerm(params_, body), args_); }

 private:
  std::vector<std::string> params_;
  std::vector<MVSet> args_;
};

std::string weight_var(std::size_t j) { return "w" + std::to_string(j); }
std::string value_var(std::size_t j) { return "a" + std::to_string(j); }

void require_combine(const MapSpec& spec, Combine combine) {
  if (combine != Combine::Sum) return;
  if (!spec.carrier().is_atomistic() || !spec.carrier().is_boolean())
    throw Error(ErrorCode::NotAtomRepresentable, "the ring sum needs a Boolean atom representation of the carrier");
  if (!spec.scale().is_atomistic() || !spec.scale().is_boolean())
    throw Error(ErrorCode::NotAtomRepresentable,
                "the ring sum is applied to confidences and needs a Boolean confidence scale");
}

// Adds the incoming edges of concept i and returns the combined term, or
// nullptr when nothing reaches i.
TermPtr add_influence(TermArgs& args, const MapSpec& spec, const WeightMatrix& weights,
                      const std::vector<MVSet>& values, std::size_t i, Combine combine) {
  const std::size_t n = spec.size();
  TermPtr acc;
  for (std::size_t j = 0; j < n; ++j) {
    const MVSet& w = weights.cell(j, i, n);
    if (w.empty() || values[j].empty()) continue;
    TermPtr edge = meet(args.add(weight_var(j), w), args.add(value_var(j), values[j]));
    acc = !acc ? edge : combine == Combine::Join ? join(acc, edge) : ring_sum(acc, edge);
  }
  return acc;
}

MVSet bottom_known(const MapSpec& spec) {
  return MVSet::single(spec.carrier_ptr(), spec.scale_ptr(), spec.carrier().bottom(), spec.scale().top());
}

MVSet top_known(const MapSpec& spec) {
  return MVSet::single(spec.carrier_ptr(), spec.scale_ptr(), spec.carrier().top(), spec.scale().top());
}

// influence ⇒ target(A_i^k, A_i^{k-1}); an empty value counts as a known bottom.
std::vector<MVSet> coefficient(const MapSpec& spec, const std::vector<MVSet>& values_k,
                               const std::vector<MVSet>& values_km1, Combine combine, const WeightMatrix& weights,
                               TermOp target_op) {
  require_combine(spec, combine);
  const std::size_t n = spec.size();
  if (values_k.size() != n || values_km1.size() != n)
    throw Error(ErrorCode::InvalidArgument, "state does not match the map's concepts");
  std::vector<MVSet> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    TermArgs args;
    TermPtr infl = add_influence(args, spec, weights, values_k, i, combine);
    if (!infl) infl = args.add("none", bottom_known(spec));
    TermPtr now = args.add(value_var(i), values_k[i].empty() ? bottom_known(spec) : values_k[i]);
    TermPtr before = args.add("p", values_km1[i].empty() ? bottom_known(spec) : values_km1[i]);
    out.push_back(args.apply(implies(infl, binary(target_op, now, before))));
  }
  return out;
}

const WeightMatrix& matrix_at(const MapSpec& spec, std::size_t choice) {
  if (choice >= spec.matrices().size())
    throw Error(ErrorCode::InvalidArgument, "matrix " + std::to_string(choice + 1) + " does not exist (map has " +
                                                std::to_string(spec.matrices().size()) + ")");
  return spec.matrices()[choice];
}

void append_key(std::string& key, const MVSet& s) {
  key += static_cast<char>('[');
  for (const auto& [x, m] : s.entries()) {
    key.append(reinterpret_cast<const char*>(&x.id), sizeof x.id);
    key.append(reinterpret_cast<const char*>(&m.id), sizeof m.id);
  }
  key += static_cast<char>(']');
}

}  // namespace

// ---------------------------------------------------------------------------
// MapSpec

MapSpec::MapSpec(LatticePtr carrier, LatticePtr scale, std::vector<std::string> concepts, std::vector<MVSet> initial,
                 std::vector<WeightMatrix> matrices, std::vector<MVSet> self_feedback)
    : carrier_(std::move(carrier)),
      scale_(std::move(scale)),
      concepts_(std::move(concepts)),
      initial_(std::move(initial)),
      matrices_(std::move(matrices)) {
  if (!carrier_ || !scale_) throw Error(ErrorCode::InvalidSpec, "map needs a carrier and a confidence scale");
  const std::size_t n = concepts_.size();
  if (n == 0) throw Error(ErrorCode::InvalidSpec, "map has no concepts");
  std::set<std::string> names(concepts_.begin(), concepts_.end());
  if (names.size() != n) throw Error(ErrorCode::InvalidSpec, "duplicate concept name");
  if (initial_.size() != n)
    throw Error(ErrorCode::InvalidSpec, "expected " + std::to_string(n) + " initial values, got " +
                                            std::to_string(initial_.size()));
  if (matrices_.empty()) throw Error(ErrorCode::InvalidSpec, "map needs at least one weight matrix");
  if (!self_feedback.empty() && self_feedback.size() != n)
    throw Error(ErrorCode::InvalidSpec, "self feedback must list every concept");

  auto check_lattices = [&](const MVSet& s, const std::string& where) {
    if (!same_lattice(s.carrier(), *carrier_) || !same_lattice(s.scale(), *scale_))
      throw Error(ErrorCode::MismatchedScales, where + " is not over the map's lattices");
  };
  for (std::size_t i = 0; i < n; ++i) check_lattices(initial_[i], "initial value of " + concepts_[i]);
  for (auto& m : matrices_) {
    if (m.cells.size() != n * n)
      throw Error(ErrorCode::InvalidSpec, "matrix '" + m.name + "' is not " + std::to_string(n) + "x" +
                                              std::to_string(n));
    for (const auto& cell : m.cells) check_lattices(cell, "a cell of matrix '" + m.name + "'");
    for (std::size_t i = 0; i < self_feedback.size(); ++i) {
      check_lattices(self_feedback[i], "self feedback of " + concepts_[i]);
      if (m.cells[i * n + i].empty()) m.cells[i * n + i] = self_feedback[i];
    }
  }
}

// ---------------------------------------------------------------------------
// Single steps

std::string MapState::key() const {
  std::string key;
  for (const auto* group : {&values, &f, &r, &c}) {
    for (const auto& s : *group) append_key(key, s);
    key += '|';
  }
  key += looped ? 'L' : '-';
  return key;
}

MapState initial_state(const MapSpec& spec) {
  MapState s;
  s.k = 0;
  s.values = spec.initial();
  s.f.assign(spec.size(), top_known(spec));
  s.r = s.f;
  s.c = s.f;
  return s;
}

MVSet influence(const MapSpec& spec, const WeightMatrix& weights, const std::vector<MVSet>& values, std::size_t i,
                Combine combine) {
  require_combine(spec, combine);
  if (i >= spec.size()) throw Error(ErrorCode::InvalidArgument, "concept index out of range");
  TermArgs args;
  TermPtr infl = add_influence(args, spec, weights, values, i, combine);
  if (!infl) return bottom_known(spec);
  return args.apply(infl);
}

std::vector<MVSet> step_values(const MapSpec& spec, const MapState& state, Combine combine,
                               const WeightMatrix& weights) {
  require_combine(spec, combine);
  const std::size_t n = spec.size();
  if (state.values.size() != n || state.f.size() != n || state.c.size() != n)
    throw Error(ErrorCode::InvalidArgument, "state does not match the map's concepts");
  std::vector<MVSet> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    TermArgs args;
    TermPtr c = args.add("c", state.c[i]);
    TermPtr f = args.add("f", state.f[i]);
    TermPtr infl = add_influence(args, spec, weights, state.values, i, combine);
    // The empty join: nothing reaches i, which is a known bottom.
    if (!infl) infl = args.add("none", bottom_known(spec));
    if (state.c[i].empty() || state.f[i].empty()) {
      out.emplace_back(spec.carrier_ptr(), spec.scale_ptr());
      continue;
    }
    out.push_back(args.apply(meet(c, meet(f, infl))));
  }
  return out;
}

std::vector<MVSet> coeff_f(const MapSpec& spec, const std::vector<MVSet>& values_k,
                           const std::vector<MVSet>& values_km1, Combine combine, const WeightMatrix& weights) {
  return coefficient(spec, values_k, values_km1, combine, weights, TermOp::Join);
}

std::vector<MVSet> coeff_r(const MapSpec& spec, const std::vector<MVSet>& values_k,
                           const std::vector<MVSet>& values_km1, Combine combine, const WeightMatrix& weights) {
  return coefficient(spec, values_k, values_km1, combine, weights, TermOp::Meet);
}

Element choose_c(const Lattice& l, Element f, Element r, bool looped) {
  return looped ? l.heyting_implies(f, r) : l.top();
}

MVSet choose_c(const MVSet& f, const MVSet& r, bool looped) {
  if (!looped) return MVSet::single(f.carrier_ptr(), f.scale_ptr(), f.carrier().top(), f.scale().top());
  return extend(LatticeTerm({"f", "r"}, implies(var("f"), var("r"))), {f, r});
}

MapState step(const MapSpec& spec, const MapState& state, Combine combine, const WeightMatrix& weights) {
  MapState next;
  next.k = state.k + 1;
  next.looped = state.looped;
  next.values = step_values(spec, state, combine, weights);
  next.f = coeff_f(spec, next.values, state.values, combine, weights);
  next.r = coeff_r(spec, next.values, state.values, combine, weights);
  for (std::size_t i = 0; i < spec.size(); ++i) next.c.push_back(choose_c(next.f[i], next.r[i], next.looped));
  return next;
}

MapState step(const MapSpec& spec, const MapState& state, Combine combine, std::size_t matrix_choice) {
  return step(spec, state, combine, matrix_at(spec, matrix_choice));
}

std::optional<int> detect_cycle(const std::vector<MapState>& history) {
  if (history.size() < 2) return std::nullopt;
  const std::string last = history.back().key();
  for (std::size_t i = history.size() - 1; i-- > 0;)
    if (history[i].key() == last) return history.back().k - history[i].k;
  return std::nullopt;
}

WeightMatrix aggregate_weights(const MapSpec& spec, MeanKind kind) {
  const std::size_t n = spec.size();
  WeightMatrix out;
  out.name = kind == MeanKind::Pessimistic ? "pessimistic" : "optimistic";
  for (std::size_t cell = 0; cell < n * n; ++cell) {
    std::vector<MVSet> present;
    for (const auto& m : spec.matrices())
      if (!m.cells[cell].empty()) present.push_back(m.cells[cell]);
    if (present.size() < 2) {
      out.cells.push_back(present.empty() ? MVSet(spec.carrier_ptr(), spec.scale_ptr()) : present.front());
      continue;
    }
    std::vector<AssessmentSet> sets;
    for (const auto& s : present) sets.emplace_back(spec.carrier_ptr(), s.support());
    AssessmentSet averaged = nary_mean(kind, sets);
    auto confidences = mean_confidences(kind, present);
    MVSet result(spec.carrier_ptr(), spec.scale_ptr());
    for (Element e : averaged.elements()) {
      auto it = confidences.find(e);
      if (it != confidences.end()) result.add(e, it->second);
    }
    out.cells.push_back(std::move(result));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Runs

namespace {

struct Branch {
  std::string id;
  MapState state;
  std::map<std::string, int> seen;  // state key -> k
  std::size_t matrix = 0;           // matrix used by the last step
  bool fixed = false;
  bool corrected = false;
};

void record(TraceTable& trace, const Branch& b) {
  for (std::size_t i = 0; i < b.state.values.size(); ++i)
    trace.rows.push_back(
        TraceRow{b.state.k, b.id, i, b.state.values[i], b.state.f[i], b.state.r[i], b.state.c[i], b.corrected});
}

void record_merged(TraceTable& trace, const MapSpec& spec, const std::vector<Branch>& branches, int k) {
  for (std::size_t i = 0; i < spec.size(); ++i) {
    MVSet merged(spec.carrier_ptr(), spec.scale_ptr());
    for (const auto& b : branches)
      for (const auto& [x, m] : b.state.values[i].entries()) merged.add(x, m);
    trace.rows.push_back(TraceRow{k, "*", i, merged, std::nullopt, std::nullopt, std::nullopt, false});
  }
}

Branch advance(const MapSpec& spec, const Branch& from, const WeightMatrix& weights, std::size_t matrix,
               Combine combine, int& corrections) {
  Branch next;
  next.id = from.id;
  next.matrix = matrix;
  next.state = step(spec, from.state, combine, weights);
  std::string key = next.state.key();
  next.fixed = key == from.state.key();
  next.seen = from.seen;
  if (!next.fixed && next.seen.count(key) && !next.state.looped) {
    next.state.looped = true;
    for (std::size_t i = 0; i < spec.size(); ++i)
      next.state.c[i] = choose_c(next.state.f[i], next.state.r[i], true);
    next.corrected = true;
    ++corrections;
    key = next.state.key();
  }
  next.seen.emplace(key, next.state.k);
  return next;
}

std::string child_id(const std::string& parent, std::size_t matrix, std::size_t matrix_count) {
  std::string digit = std::to_string(matrix + 1);
  if (parent == "0") return digit;
  return matrix_count > 9 ? parent + "." + digit : parent + digit;
}

RunResult finish(const MapSpec& spec, RunResult result, const std::vector<Branch>& branches) {
  for (const auto& b : branches) {
    result.branch_ids.push_back(b.id);
    result.final_states.push_back(b.state);
  }
  for (std::size_t i = 0; i < spec.size(); ++i) {
    MVSet merged(spec.carrier_ptr(), spec.scale_ptr());
    for (const auto& b : branches)
      for (const auto& [x, m] : b.state.values[i].entries()) merged.add(x, m);
    result.merged.push_back(std::move(merged));
  }
  return result;
}

RunResult run_fixed_matrix(const MapSpec& spec, const WeightMatrix& weights, const std::string& id,
                           const RunOptions& options) {
  RunResult result;
  result.trace = TraceTable{spec.carrier_ptr(), spec.scale_ptr(), spec.concepts(), {}};
  Branch b;
  b.id = id;
  b.state = initial_state(spec);
  b.seen.emplace(b.state.key(), 0);
  record(result.trace, b);
  for (int k = 1; k <= options.max_iter; ++k) {
    b = advance(spec, b, weights, 0, options.combine, result.loop_corrections);
    record(result.trace, b);
    result.iterations = k;
    if (b.fixed) {
      result.converged = true;
      break;
    }
  }
  return finish(spec, std::move(result), {b});
}

RunResult run_enumerate(const MapSpec& spec, const RunOptions& options) {
  RunResult result;
  result.trace = TraceTable{spec.carrier_ptr(), spec.scale_ptr(), spec.concepts(), {}};
  const std::size_t matrices = spec.matrices().size();
  std::vector<Branch> branches(1);
  branches[0].id = "0";
  branches[0].state = initial_state(spec);
  branches[0].seen.emplace(branches[0].state.key(), 0);
  record(result.trace, branches[0]);
  record_merged(result.trace, spec, branches, 0);

  for (int k = 1; k <= options.max_iter; ++k) {
    std::vector<Branch> next;
    std::set<std::pair<std::string, std::size_t>> present;
    bool all_fixed = true;
    for (const auto& b : branches) {
      std::vector<std::size_t> choices;
      if (k <= options.branch_depth) {
        for (std::size_t m = 0; m < matrices; ++m) choices.push_back(m);
      } else {
        choices.push_back(b.matrix);
      }
      for (std::size_t m : choices) {
        Branch child = advance(spec, b, spec.matrices()[m], m, options.combine, result.loop_corrections);
        child.id = k <= options.branch_depth ? child_id(b.id, m, matrices) : b.id;
        all_fixed = all_fixed && child.fixed;
        // Equal states continuing with the same matrix are one branch.
        if (!present.emplace(child.state.key(), m).second) continue;
        next.push_back(std::move(child));
      }
    }
    branches = std::move(next);
    for (const auto& b : branches) record(result.trace, b);
    record_merged(result.trace, spec, branches, k);
    result.iterations = k;
    if (k > options.branch_depth && all_fixed) {
      result.converged = true;
      break;
    }
  }
  return finish(spec, std::move(result), branches);
}

}  // namespace

std::string RunResult::status() const {
  std::string s = converged ? "converged after " + std::to_string(iterations) + " iterations"
                            : "NotConverged: no fixed point within " + std::to_string(iterations) + " iterations";
  if (loop_corrections > 0) s += " (" + std::to_string(loop_corrections) + " loop corrections)";
  return s;
}

RunResult run(const MapSpec& spec, const RunOptions& options) {
  if (options.max_iter < 0) throw Error(ErrorCode::InvalidArgument, "max_iter must not be negative");
  if (options.branch_depth < 0) throw Error(ErrorCode::InvalidArgument, "branch depth must not be negative");
  require_combine(spec, options.combine);
  switch (options.mode) {
    case WeightMode::Single:
      return run_fixed_matrix(spec, matrix_at(spec, options.matrix), std::to_string(options.matrix + 1), options);
    case WeightMode::Enumerate:
      return run_enumerate(spec, options);
    case WeightMode::Pessimistic:
      return run_fixed_matrix(spec, aggregate_weights(spec, MeanKind::Pessimistic), "pes", options);
    case WeightMode::Optimistic:
      return run_fixed_matrix(spec, aggregate_weights(spec, MeanKind::Optimistic), "opt", options);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown weight mode");
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string labels_of(const MVSet& s, bool confidences) {
  if (s.empty()) return "-";
  std::string out;
  for (const auto& [x, m] : s.entries()) {
    if (!out.empty()) out += ' ';
    out += confidences ? s.scale().label(m) : s.carrier().label(x);
  }
  return out;
}

std::vector<const TraceRow*> ordered_rows(const TraceTable& trace) {
  std::vector<const TraceRow*> rows;
  for (const auto& r : trace.rows) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const TraceRow* a, const TraceRow* b) {
    return std::tie(a->branch, a->k, a->concept_index) < std::tie(b->branch, b->k, b->concept_index);
  });
  return rows;
}

std::string pairs_of(const MVSet& s) {
  if (s.empty()) return "-";
  return to_string(s);
}

}  // namespace

std::string render_trace(const TraceTable& trace, TraceFormat format) {
  std::ostringstream out;
  const auto rows = ordered_rows(trace);
  if (format == TraceFormat::Tsv) {
    out << "k\tbranch\tconcept\tvalues\tconfidences\tf\tr\tc\tnote\n";
    for (const TraceRow* r : rows) {
      auto coeff = [](const std::optional<MVSet>& s) { return s ? labels_of(*s, false) : std::string(); };
      out << r->k << '\t' << r->branch << '\t' << trace.concepts.at(r->concept_index) << '\t' << labels_of(r->value, false)
          << '\t' << labels_of(r->value, true) << '\t' << coeff(r->f) << '\t' << coeff(r->r) << '\t' << coeff(r->c)
          << '\t' << (r->corrected ? "loop" : "") << '\n';
    }
    return out.str();
  }

  // Markdown: one table per branch, concepts down, iterations across.
  std::vector<std::string> branches;
  for (const TraceRow* r : rows)
    if (branches.empty() || branches.back() != r->branch) branches.push_back(r->branch);
  bool first = true;
  for (const auto& branch : branches) {
    std::set<int> ks;
    std::map<std::pair<std::size_t, int>, const TraceRow*> cells;
    for (const TraceRow* r : rows)
      if (r->branch == branch) {
        ks.insert(r->k);
        cells[{r->concept_index, r->k}] = r;
      }
    if (!first) out << '\n';
    first = false;
    out << "### branch " << (branch == "*" ? std::string("* (merged)") : branch) << "\n\n| concept |";
    for (int k : ks) out << " k=" << k << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < ks.size(); ++i) out << "---|";
    out << '\n';
    for (std::size_t c = 0; c < trace.concepts.size(); ++c) {
      out << "| " << trace.concepts[c] << " |";
      for (int k : ks) {
        auto it = cells.find({c, k});
        out << ' ' << (it == cells.end() ? std::string() : pairs_of(it->second->value))
            << (it != cells.end() && it->second->corrected ? " (loop)" : "") << " |";
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace mvl
