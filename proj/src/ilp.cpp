#include "omega/ilp.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>

namespace omega::ilp {
namespace {

using I128 = __int128;

Int floor_div(I128 a, I128 b) {
  I128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return static_cast<Int>(q);
}

Int ceil_div(I128 a, I128 b) {
  I128 q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return static_cast<Int>(q);
}

// Word-level dst |= dst << shift (bit shift), truncated at dst size.
void or_self_shifted(std::vector<std::uint64_t>& dst, Int shift_bits) {
  const std::size_t words = dst.size();
  const std::size_t ws = static_cast<std::size_t>(shift_bits / 64);
  const unsigned bs = static_cast<unsigned>(shift_bits % 64);
  if (ws >= words) return;
  if (bs == 0) {
    for (std::size_t i = words; i-- > ws;) dst[i] |= dst[i - ws];
  } else {
    for (std::size_t i = words; i-- > ws;) {
      std::uint64_t v = dst[i - ws] << bs;
      if (i - ws > 0) v |= dst[i - ws - 1] >> (64 - bs);
      dst[i] |= v;
    }
  }
}

bool test_bit(const std::vector<std::uint64_t>& bs, Int pos) {
  if (pos < 0) return false;
  std::size_t w = static_cast<std::size_t>(pos) / 64;
  if (w >= bs.size()) return false;
  return (bs[w] >> (static_cast<std::size_t>(pos) % 64)) & 1u;
}

// First set bit at position >= from, or -1.
Int first_set_from(const std::vector<std::uint64_t>& bs, Int from) {
  if (from < 0) from = 0;
  std::size_t w = static_cast<std::size_t>(from) / 64;
  if (w >= bs.size()) return -1;
  std::uint64_t word = bs[w] & (~0ull << (static_cast<std::size_t>(from) % 64));
  while (true) {
    if (word != 0) {
      return static_cast<Int>(w * 64 + static_cast<std::size_t>(
                                            __builtin_ctzll(word)));
    }
    if (++w >= bs.size()) return -1;
    word = bs[w];
  }
}

constexpr Int kDpBitLimit = 1LL << 26;  // per-stage bitset cap

struct SparseRow {
  std::vector<std::pair<int, Int>> terms;  // (var, nonzero coeff)
  Relation rel = Relation::Eq;
  Int rhs = 0;
};

class Solver {
 public:
  Solver(const IntegerProgram& ip,
         std::optional<std::chrono::steady_clock::time_point> deadline)
      : sense_(ip.sense), obj_(ip.objective), deadline_(deadline) {
    n_ = ip.num_vars;
    lb_ = ip.lower;
    ub_ = ip.upper;
    if (!ip.kinds.empty()) {
      for (int v = 0; v < n_; ++v) {
        if (ip.kinds[static_cast<std::size_t>(v)] == VarKind::Binary) {
          lb_[static_cast<std::size_t>(v)] = std::max<Int>(lb_[v], 0);
          ub_[static_cast<std::size_t>(v)] = std::min<Int>(ub_[v], 1);
        }
      }
    }
    occ_.resize(static_cast<std::size_t>(n_));
    for (const LinearConstraint& c : ip.constraints) {
      SparseRow row;
      row.rel = c.rel;
      row.rhs = c.rhs;
      for (int v = 0; v < n_; ++v) {
        if (c.coeffs[static_cast<std::size_t>(v)] != 0) {
          row.terms.emplace_back(v, c.coeffs[static_cast<std::size_t>(v)]);
        }
      }
      for (auto [v, a] : row.terms) {
        occ_[static_cast<std::size_t>(v)].push_back(
            static_cast<int>(rows_.size()));
      }
      rows_.push_back(std::move(row));
    }
    in_queue_.assign(rows_.size(), false);
  }

  SolveOutcome run() {
    for (int v = 0; v < n_; ++v) {
      if (lb_[static_cast<std::size_t>(v)] > ub_[static_cast<std::size_t>(v)]) {
        return {SolveStatus::Infeasible, 0, {}};
      }
    }
    bool ok = true;
    for (std::size_t r = 0; r < rows_.size(); ++r) enqueue(static_cast<int>(r));
    ok = propagate();
    if (ok) search();
    if (!has_incumbent_) return {SolveStatus::Infeasible, 0, {}};
    return {SolveStatus::Optimal, best_value_, best_witness_};
  }

 private:
  // ---- bound trail ----
  struct TrailEntry {
    int var;
    bool is_lower;
    Int old;
  };

  void set_lb(int v, Int val) {
    if (val <= lb_[static_cast<std::size_t>(v)]) return;
    trail_.push_back({v, true, lb_[static_cast<std::size_t>(v)]});
    lb_[static_cast<std::size_t>(v)] = val;
    for (int r : occ_[static_cast<std::size_t>(v)]) enqueue(r);
  }

  void set_ub(int v, Int val) {
    if (val >= ub_[static_cast<std::size_t>(v)]) return;
    trail_.push_back({v, false, ub_[static_cast<std::size_t>(v)]});
    ub_[static_cast<std::size_t>(v)] = val;
    for (int r : occ_[static_cast<std::size_t>(v)]) enqueue(r);
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const TrailEntry& e = trail_.back();
      if (e.is_lower) {
        lb_[static_cast<std::size_t>(e.var)] = e.old;
      } else {
        ub_[static_cast<std::size_t>(e.var)] = e.old;
      }
      trail_.pop_back();
    }
  }

  void enqueue(int r) {
    if (!in_queue_[static_cast<std::size_t>(r)]) {
      in_queue_[static_cast<std::size_t>(r)] = true;
      queue_.push_back(r);
    }
  }

  // ---- propagation ----
  // Interval tightening to fixpoint. Returns false on proven infeasibility.
  bool propagate() {
    while (!queue_.empty()) {
      int r = queue_.back();
      queue_.pop_back();
      in_queue_[static_cast<std::size_t>(r)] = false;
      if (!propagate_row(rows_[static_cast<std::size_t>(r)])) {
        // drain pending marks
        for (int q : queue_) in_queue_[static_cast<std::size_t>(q)] = false;
        queue_.clear();
        return false;
      }
    }
    return true;
  }

  bool propagate_row(const SparseRow& row) {
    I128 min_act = 0, max_act = 0;
    for (auto [v, a] : row.terms) {
      I128 alb = static_cast<I128>(a) * lb_[static_cast<std::size_t>(v)];
      I128 aub = static_cast<I128>(a) * ub_[static_cast<std::size_t>(v)];
      min_act += a > 0 ? alb : aub;
      max_act += a > 0 ? aub : alb;
    }
    const I128 b = row.rhs;
    if (row.rel != Relation::Ge && min_act > b) return false;
    if (row.rel != Relation::Le && max_act < b) return false;
    for (auto [v, a] : row.terms) {
      Int l = lb_[static_cast<std::size_t>(v)];
      Int u = ub_[static_cast<std::size_t>(v)];
      if (l == u) continue;
      I128 vmin = a > 0 ? static_cast<I128>(a) * l : static_cast<I128>(a) * u;
      I128 vmax = a > 0 ? static_cast<I128>(a) * u : static_cast<I128>(a) * l;
      if (row.rel != Relation::Ge) {  // upper side: a*v <= b - (min_act - vmin)
        I128 c = b - (min_act - vmin);
        if (a > 0) {
          set_ub(v, floor_div(c, a));
        } else {
          set_lb(v, ceil_div(c, a));
        }
      }
      if (row.rel != Relation::Le) {  // lower side: a*v >= b - (max_act - vmax)
        I128 c = b - (max_act - vmax);
        if (a > 0) {
          set_lb(v, ceil_div(c, a));
        } else {
          set_ub(v, floor_div(c, a));
        }
      }
      if (lb_[static_cast<std::size_t>(v)] > ub_[static_cast<std::size_t>(v)]) {
        return false;
      }
    }
    return true;
  }

  // ---- search ----
  bool fixed(int v) const {
    return lb_[static_cast<std::size_t>(v)] == ub_[static_cast<std::size_t>(v)];
  }

  I128 objective_bound() const {
    I128 s = 0;
    for (int v = 0; v < n_; ++v) {
      I128 cl = static_cast<I128>(obj_[static_cast<std::size_t>(v)]) *
                lb_[static_cast<std::size_t>(v)];
      I128 cu = static_cast<I128>(obj_[static_cast<std::size_t>(v)]) *
                ub_[static_cast<std::size_t>(v)];
      if (sense_ == Sense::Maximize) {
        s += std::max(cl, cu);
      } else {
        s += std::min(cl, cu);
      }
    }
    return s;
  }

  void check_deadline() {
    if (deadline_ && (++tick_ & 0xfff) == 0 &&
        std::chrono::steady_clock::now() > *deadline_) {
      throw SolveTimeout();
    }
  }

  void offer_incumbent() {
    I128 val = 0;
    for (int v = 0; v < n_; ++v) {
      val += static_cast<I128>(obj_[static_cast<std::size_t>(v)]) *
             lb_[static_cast<std::size_t>(v)];
    }
    Int value = static_cast<Int>(val);
    if (has_incumbent_) {
      bool better = sense_ == Sense::Maximize ? value > best_value_
                                              : value < best_value_;
      if (!better) {
        if (value != best_value_ ||
            !std::lexicographical_compare(lb_.begin(), lb_.end(),
                                          best_witness_.begin(),
                                          best_witness_.end())) {
          return;
        }
      }
    }
    has_incumbent_ = true;
    best_value_ = value;
    best_witness_ = lb_;
  }

  void search() {
    check_deadline();
    if (has_incumbent_) {
      I128 bound = objective_bound();
      if (sense_ == Sense::Maximize ? bound < best_value_
                                    : bound > best_value_) {
        return;
      }
    }
    int branch_var = -1;
    bool rest_zero_obj = true;
    for (int v = 0; v < n_; ++v) {
      if (!fixed(v)) {
        if (branch_var < 0) branch_var = v;
        if (obj_[static_cast<std::size_t>(v)] != 0) rest_zero_obj = false;
      }
    }
    if (branch_var < 0) {
      offer_incumbent();
      return;
    }
    if (rest_zero_obj) {
      // The objective is decided; only feasibility of the remaining box is
      // left. Solve it component by component, lexicographically smallest
      // assignment first.
      std::size_t mark = trail_.size();
      if (finish_zero_objective_tail()) offer_incumbent();
      undo_to(mark);
      return;
    }
    const Int lo = lb_[static_cast<std::size_t>(branch_var)];
    const Int hi = ub_[static_cast<std::size_t>(branch_var)];
    if (sense_ == Sense::Maximize) {
      for (Int val = hi; val >= lo; --val) {
        branch_on(branch_var, val);
      }
    } else {
      for (Int val = lo; val <= hi; ++val) {
        branch_on(branch_var, val);
      }
    }
  }

  void branch_on(int v, Int val) {
    if (val < lb_[static_cast<std::size_t>(v)] ||
        val > ub_[static_cast<std::size_t>(v)]) {
      return;  // shrunk by a sibling's propagation being undone incorrectly
    }
    std::size_t mark = trail_.size();
    set_lb(v, val);
    set_ub(v, val);
    if (propagate()) search();
    undo_to(mark);
  }

  // ---- zero-objective tail ----
  bool row_entailed(const SparseRow& row) const {
    I128 min_act = 0, max_act = 0;
    for (auto [v, a] : row.terms) {
      I128 alb = static_cast<I128>(a) * lb_[static_cast<std::size_t>(v)];
      I128 aub = static_cast<I128>(a) * ub_[static_cast<std::size_t>(v)];
      min_act += a > 0 ? alb : aub;
      max_act += a > 0 ? aub : alb;
    }
    switch (row.rel) {
      case Relation::Le:
        return max_act <= row.rhs;
      case Relation::Ge:
        return min_act >= row.rhs;
      case Relation::Eq:
        return min_act == max_act && min_act == row.rhs;
    }
    return false;
  }

  // Fixes every remaining variable (on the trail) to a feasible assignment,
  // lexicographically smallest, or reports infeasibility.
  bool finish_zero_objective_tail() {
    // Union free variables connected through rows that still constrain more
    // than one of them. Rows whose remaining freedom is a single variable are
    // already resolved by propagation (interval + divisibility collapse).
    std::vector<int> comp(static_cast<std::size_t>(n_), -1);
    std::vector<std::vector<int>> comp_vars;
    std::vector<std::vector<int>> comp_rows;
    std::vector<int> free_in_row;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const SparseRow& row = rows_[r];
      free_in_row.clear();
      for (auto [v, a] : row.terms) {
        if (!fixed(v)) free_in_row.push_back(v);
      }
      if (free_in_row.size() < 2) continue;
      if (row_entailed(row)) continue;
      int target = -1;
      for (int v : free_in_row) {
        if (comp[static_cast<std::size_t>(v)] >= 0) {
          target = comp[static_cast<std::size_t>(v)];
          break;
        }
      }
      if (target < 0) {
        target = static_cast<int>(comp_vars.size());
        comp_vars.emplace_back();
        comp_rows.emplace_back();
      }
      for (int v : free_in_row) {
        int old = comp[static_cast<std::size_t>(v)];
        if (old == target) continue;
        if (old < 0) {
          comp[static_cast<std::size_t>(v)] = target;
          comp_vars[static_cast<std::size_t>(target)].push_back(v);
        } else {
          // merge old into target
          for (int w : comp_vars[static_cast<std::size_t>(old)]) {
            comp[static_cast<std::size_t>(w)] = target;
            comp_vars[static_cast<std::size_t>(target)].push_back(w);
          }
          comp_vars[static_cast<std::size_t>(old)].clear();
          for (int rr : comp_rows[static_cast<std::size_t>(old)]) {
            comp_rows[static_cast<std::size_t>(target)].push_back(rr);
          }
          comp_rows[static_cast<std::size_t>(old)].clear();
        }
      }
      comp_rows[static_cast<std::size_t>(target)].push_back(
          static_cast<int>(r));
    }
    for (std::size_t c = 0; c < comp_vars.size(); ++c) {
      if (comp_vars[c].empty()) continue;
      std::sort(comp_vars[c].begin(), comp_vars[c].end());
      if (!solve_component(comp_vars[c], comp_rows[c])) return false;
    }
    // Unconstrained leftovers take their lower bound; nothing to do, the
    // witness reads lb_.
    for (int v = 0; v < n_; ++v) {
      if (!fixed(v)) set_ub(v, lb_[static_cast<std::size_t>(v)]);
    }
    return true;
  }

  bool solve_component(const std::vector<int>& vars,
                       const std::vector<int>& rows) {
    if (try_single_form(vars, rows)) return component_ok_;
    return component_dfs(vars, 0);
  }

  // Detects the pattern where every constraint on the component restricts the
  // same linear form w = sum a_i v_i (up to sign) with positive a_i, and
  // resolves it by reachability DP over w, Apery-style. Returns true when the
  // pattern applied; the verdict lands in component_ok_.
  bool try_single_form(const std::vector<int>& vars,
                       const std::vector<int>& rows) {
    const std::size_t k = vars.size();
    std::vector<Int> base(k, 0);
    std::vector<int> pos_of(static_cast<std::size_t>(n_), -1);
    for (std::size_t i = 0; i < k; ++i) {
      pos_of[static_cast<std::size_t>(vars[i])] = static_cast<int>(i);
    }
    bool base_set = false;
    I128 w_lo = std::numeric_limits<I128>::min() / 4;
    I128 w_hi = std::numeric_limits<I128>::max() / 4;
    std::vector<std::pair<int, int>> row_signs;  // (row, sign)
    for (int r : rows) {
      const SparseRow& row = rows_[static_cast<std::size_t>(r)];
      std::vector<Int> restr(k, 0);
      I128 fixed_part = 0;
      for (auto [v, a] : row.terms) {
        int p = pos_of[static_cast<std::size_t>(v)];
        if (p >= 0 && !fixed(v)) {
          restr[static_cast<std::size_t>(p)] = a;
        } else {
          fixed_part += static_cast<I128>(a) * lb_[static_cast<std::size_t>(v)];
        }
      }
      int sign = 0;
      for (std::size_t i = 0; i < k; ++i) {
        if (restr[i] != 0) {
          sign = restr[i] > 0 ? 1 : -1;
          break;
        }
      }
      if (sign == 0) continue;  // row no longer touches the free part
      if (!base_set) {
        for (std::size_t i = 0; i < k; ++i) base[i] = sign * restr[i];
        base_set = true;
      }
      for (std::size_t i = 0; i < k; ++i) {
        if (restr[i] != sign * base[i]) return false;
      }
      // sign * w  rel  rhs - fixed_part
      I128 c = static_cast<I128>(row.rhs) - fixed_part;
      switch (row.rel) {
        case Relation::Le:
          if (sign > 0) {
            w_hi = std::min(w_hi, c);
          } else {
            w_lo = std::max(w_lo, -c);
          }
          break;
        case Relation::Ge:
          if (sign > 0) {
            w_lo = std::max(w_lo, c);
          } else {
            w_hi = std::min(w_hi, -c);
          }
          break;
        case Relation::Eq:
          w_lo = std::max(w_lo, sign > 0 ? c : -c);
          w_hi = std::min(w_hi, sign > 0 ? c : -c);
          break;
      }
    }
    if (!base_set) {
      component_ok_ = true;  // everything entailed; lower bounds will do
      for (int v : vars) set_ub(v, lb_[static_cast<std::size_t>(v)]);
      return true;
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (base[i] <= 0) return false;
    }
    // Shift to t_i = v_i - lb_i, target window on T = w - wmin.
    I128 wmin = 0;
    I128 span = 0;
    std::vector<Int> cap(k);
    for (std::size_t i = 0; i < k; ++i) {
      int v = vars[i];
      wmin += static_cast<I128>(base[i]) * lb_[static_cast<std::size_t>(v)];
      cap[i] = ub_[static_cast<std::size_t>(v)] -
               lb_[static_cast<std::size_t>(v)];
      span += static_cast<I128>(base[i]) * cap[i];
    }
    I128 t_lo128 = w_lo - wmin;
    I128 t_hi128 = w_hi - wmin;
    if (t_hi128 < 0 || t_lo128 > span) {
      component_ok_ = false;
      return true;
    }
    Int t_lo = t_lo128 < 0 ? 0 : static_cast<Int>(t_lo128);
    Int t_hi = t_hi128 > span ? static_cast<Int>(span) : static_cast<Int>(t_hi128);
    // Sums only grow along the suffix construction, so truncating the
    // bitsets at the top of the target window keeps them exact there.
    if (t_hi > kDpBitLimit) return false;
    const Int nbits = t_hi + 1;
    const std::size_t words = static_cast<std::size_t>((nbits + 63) / 64);
    // Suffix reachability: reach[i] = sums achievable using vars i..k-1.
    std::vector<std::vector<std::uint64_t>> reach(k + 1);
    reach[k].assign(words, 0);
    reach[k][0] = 1;
    for (std::size_t i = k; i-- > 0;) {
      reach[i] = reach[i + 1];
      Int remaining = cap[i];
      Int chunk = 1;
      while (remaining > 0) {
        Int m = std::min(chunk, remaining);
        or_self_shifted(reach[i], base[i] * m);
        remaining -= m;
        chunk *= 2;
      }
    }
    {
      Int probe = first_set_from(reach[0], t_lo);
      if (probe < 0 || probe > t_hi) {
        component_ok_ = false;
        return true;
      }
    }
    // Lexicographically smallest witness: smallest t for the earliest
    // variable such that the remainder stays reachable inside the window.
    Int done = 0;
    for (std::size_t i = 0; i < k; ++i) {
      Int chosen = -1;
      for (Int t = 0; t <= cap[i]; ++t) {
        Int lo = t_lo - done - base[i] * t;
        Int hi = t_hi - done - base[i] * t;
        if (hi < 0) break;
        Int probe = first_set_from(reach[i + 1], lo);
        if (probe >= 0 && probe <= hi) {
          chosen = t;
          break;
        }
      }
      if (chosen < 0) {
        component_ok_ = false;  // cannot happen if the probe above succeeded
        return true;
      }
      done += base[i] * chosen;
      int v = vars[i];
      Int val = lb_[static_cast<std::size_t>(v)] + chosen;
      set_lb(v, val);
      set_ub(v, val);
    }
    component_ok_ = true;
    return true;
  }

  bool component_dfs(const std::vector<int>& vars, std::size_t idx) {
    check_deadline();
    while (idx < vars.size() && fixed(vars[idx])) ++idx;
    if (idx == vars.size()) return true;
    int v = vars[idx];
    const Int lo = lb_[static_cast<std::size_t>(v)];
    const Int hi = ub_[static_cast<std::size_t>(v)];
    for (Int val = lo; val <= hi; ++val) {
      if (val < lb_[static_cast<std::size_t>(v)] ||
          val > ub_[static_cast<std::size_t>(v)]) {
        continue;
      }
      std::size_t mark = trail_.size();
      set_lb(v, val);
      set_ub(v, val);
      if (propagate() && component_dfs(vars, idx + 1)) return true;
      undo_to(mark);
    }
    return false;
  }

  int n_ = 0;
  Sense sense_;
  std::vector<Int> obj_;
  std::vector<SparseRow> rows_;
  std::vector<std::vector<int>> occ_;
  std::vector<Int> lb_, ub_;
  std::vector<TrailEntry> trail_;
  std::vector<int> queue_;
  std::vector<char> in_queue_;
  bool has_incumbent_ = false;
  Int best_value_ = 0;
  std::vector<Int> best_witness_;
  bool component_ok_ = false;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::uint64_t tick_ = 0;
};

void validate(const IntegerProgram& ip) {
  const std::size_t n = static_cast<std::size_t>(ip.num_vars);
  if (ip.num_vars < 0 || ip.objective.size() != n || ip.lower.size() != n ||
      ip.upper.size() != n || (!ip.kinds.empty() && ip.kinds.size() != n)) {
    throw ModelError(ModelErrorCode::ModelMalformed,
                     "objective/bounds size does not match num_vars");
  }
  for (const LinearConstraint& c : ip.constraints) {
    if (c.coeffs.size() != n) {
      throw ModelError(ModelErrorCode::ModelMalformed,
                       "constraint length does not match num_vars");
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (ip.upper[v] == kUnbounded) {
      throw ModelError(ModelErrorCode::UnboundedVariable,
                       "variable " + std::to_string(v) +
                           " has no finite upper bound");
    }
  }
}

}  // namespace

SolveOutcome solve(const IntegerProgram& ip,
                   std::optional<std::chrono::steady_clock::time_point>
                       deadline) {
  validate(ip);
  Solver solver(ip, deadline);
  return solver.run();
}

}  // namespace omega::ilp
