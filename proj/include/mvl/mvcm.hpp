#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mvl/aggregation.hpp"
#include "mvl/mvset.hpp"

namespace mvl {

enum class Combine { Join, Sum };

/// One expert's n×n weight matrix; cell(j, i) is the influence of concept j on
/// concept i. An empty cell means no influence.
struct WeightMatrix {
  std::string name;
  std::vector<MVSet> cells;  // row-major, cells[j * n + i]

  const MVSet& cell(std::size_t from, std::size_t to, std::size_t n) const { return cells[from * n + to]; }
};

/// Validated cognitive map: concepts, their initial multi-valued values and
/// one weight matrix per expert, all over the same (L, M).
class MapSpec {
 public:
  /// `self_feedback`, when non-empty, supplies w_ii for matrices whose diagonal
  /// cell is empty. Throws InvalidSpec or MismatchedScales.
  MapSpec(LatticePtr carrier, LatticePtr scale, std::vector<std::string> concepts, std::vector<MVSet> initial,
          std::vector<WeightMatrix> matrices, std::vector<MVSet> self_feedback = {});

  const Lattice& carrier() const { return *carrier_; }
  const Lattice& scale() const { return *scale_; }
  const LatticePtr& carrier_ptr() const { return carrier_; }
  const LatticePtr& scale_ptr() const { return scale_; }
  std::size_t size() const { return concepts_.size(); }
  const std::vector<std::string>& concepts() const { return concepts_; }
  const std::vector<MVSet>& initial() const { return initial_; }
  const std::vector<WeightMatrix>& matrices() const { return matrices_; }

 private:
  LatticePtr carrier_;
  LatticePtr scale_;
  std::vector<std::string> concepts_;
  std::vector<MVSet> initial_;
  std::vector<WeightMatrix> matrices_;
};

/// Concept values and the control coefficients f, r, c after iteration k.
struct MapState {
  int k = 0;
  std::vector<MVSet> values;
  std::vector<MVSet> f;
  std::vector<MVSet> r;
  std::vector<MVSet> c;
  bool looped = false;

  /// Byte key over values, coefficients and the loop flag; equal keys mean
  /// equal states.
  std::string key() const;
};

/// k = 0 with f⁰ = r⁰ = c⁰ = {(top, top)}.
MapState initial_state(const MapSpec& spec);

/// Combined influence on concept i: COMBINE_j (w_ji ∧ A_j), through extend.
/// Edges with an empty weight cell or an empty source value contribute nothing;
/// when nothing reaches i the result is {(bottom, top)}.
MVSet influence(const MapSpec& spec, const WeightMatrix& weights, const std::vector<MVSet>& values, std::size_t i,
                Combine combine);

/// New concept values c ∧ f ∧ COMBINE_j (w_ji ∧ A_j) from `state`.
std::vector<MVSet> step_values(const MapSpec& spec, const MapState& state, Combine combine,
                               const WeightMatrix& weights);

/// f_i = influence(A^k) ⇒ (A_i^k ∨ A_i^{k-1}) per concept.
std::vector<MVSet> coeff_f(const MapSpec& spec, const std::vector<MVSet>& values_k,
                           const std::vector<MVSet>& values_km1, Combine combine, const WeightMatrix& weights);
/// r_i = influence(A^k) ⇒ (A_i^k ∧ A_i^{k-1}) per concept.
std::vector<MVSet> coeff_r(const MapSpec& spec, const std::vector<MVSet>& values_k,
                           const std::vector<MVSet>& values_km1, Combine combine, const WeightMatrix& weights);

/// top until the map loops; afterwards the lower end f ⇒ r of the admissible range.
MVSet choose_c(const MVSet& f, const MVSet& r, bool looped);
Element choose_c(const Lattice& l, Element f, Element r, bool looped);

/// One full iteration: values, then f, r and c for the new state.
MapState step(const MapSpec& spec, const MapState& state, Combine combine, const WeightMatrix& weights);
MapState step(const MapSpec& spec, const MapState& state, Combine combine, std::size_t matrix_choice);

/// Period of the first recurrence of the last state in `history`
/// (1 = fixed point), or nothing.
std::optional<int> detect_cycle(const std::vector<MapState>& history);

/// Cell-wise mean of all experts' matrices; confidences of mean elements are
/// the support-restricted mean confidences.
WeightMatrix aggregate_weights(const MapSpec& spec, MeanKind kind);

enum class WeightMode { Single, Enumerate, Pessimistic, Optimistic };

struct RunOptions {
  Combine combine = Combine::Join;
  WeightMode mode = WeightMode::Single;
  std::size_t matrix = 0;  // used by Single
  int max_iter = 100;
  /// Enumerate: number of leading steps that branch over every matrix; later
  /// steps continue each branch with its last matrix.
  int branch_depth = 4;
};

struct TraceRow {
  int k = 0;
  std::string branch;  // "*" marks the merge over all branches
  std::size_t concept_index = 0;
  MVSet value;
  std::optional<MVSet> f;
  std::optional<MVSet> r;
  std::optional<MVSet> c;
  bool corrected = false;  // c switched to f ⇒ r at this row
};

struct TraceTable {
  LatticePtr carrier;
  LatticePtr scale;
  std::vector<std::string> concepts;
  std::vector<TraceRow> rows;
};

struct RunResult {
  TraceTable trace;
  bool converged = false;
  int iterations = 0;        // steps performed
  int loop_corrections = 0;  // times c was switched because of a loop
  std::vector<std::string> branch_ids;
  std::vector<MapState> final_states;  // one per branch, same order as branch_ids
  std::vector<MVSet> merged;           // final values merged over branches

  std::string status() const;
};

/// Iterate the map until a fixed point or `max_iter` steps. Loops switch c to
/// f ⇒ r and the iteration continues. Never throws NotConverged; check
/// `converged`.
RunResult run(const MapSpec& spec, const RunOptions& options);

enum class TraceFormat { Tsv, Markdown };

/// Rows ordered by (branch, k, concept). TSV has one row per trace row;
/// Markdown has one table per branch with concepts as rows and iterations as
/// columns.
std::string render_trace(const TraceTable& trace, TraceFormat format);

}  // namespace mvl
