#include "eomp/pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace eomp {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::epsilon_reached: return "epsilon-reached";
    case Termination::max_iter: return "max-iter";
    case Termination::stalled: return "stalled";
    case Termination::exhausted_atoms: return "exhausted-atoms";
  }
  return "?";
}

const char* to_string(PursuitAlgo algo) {
  switch (algo) {
    case PursuitAlgo::omp: return "omp";
    case PursuitAlgo::eomp: return "eomp";
    case PursuitAlgo::omp_ls: return "omp-ls";
  }
  return "?";
}

std::optional<PursuitAlgo> parse_algo(std::string_view name) {
  if (name == "omp") return PursuitAlgo::omp;
  if (name == "eomp") return PursuitAlgo::eomp;
  if (name == "omp-ls") return PursuitAlgo::omp_ls;
  return std::nullopt;
}

std::optional<Vec> gram_schmidt_step(std::span<const double> psi, std::span<const double> d) {
  if (psi.size() != d.size()) {
    throw DimensionError("gram_schmidt_step: length mismatch");
  }
  if (std::abs(norm2(d) - 1.0) > kUnitNormTol) {
    throw ContractError("gram_schmidt_step: d is not unit norm");
  }
  Vec w(psi.begin(), psi.end());
  axpy_inplace(-dot(d, psi), d, w);
  const double remaining = norm2(w);
  if (remaining < kDegeneracyTol) {
    return std::nullopt;
  }
  for (double& v : w) {
    v /= remaining;
  }
  return w;
}

std::optional<Selection> select_max_correlation(const Mat& atoms,
                                                const std::vector<int>& candidates,
                                                std::span<const double> r) {
  Selection best;
  double best_mag = -1.0;
  // Candidates are kept ascending, so a strict > keeps the lowest index on ties.
  for (int idx : candidates) {
    const double c = dot(atoms.col(idx), r);
    if (std::abs(c) > best_mag) {
      best_mag = std::abs(c);
      best.index = idx;
      best.correlation = c;
    }
  }
  if (best.index < 0) {
    return std::nullopt;
  }
  return best;
}

namespace {

void validate_inputs(const Dictionary& dict, const Vec& y, const StopRule& stop) {
  if (static_cast<int>(y.size()) != dict.n()) {
    throw DimensionError("pursuit: observation length " + std::to_string(y.size()) +
                         " does not match dictionary rows " + std::to_string(dict.n()));
  }
  for (double v : y) {
    if (!std::isfinite(v)) {
      throw ParameterError("pursuit: observation contains a non-finite entry");
    }
  }
  if (stop.epsilon < 0.0) {
    throw ParameterError("pursuit: epsilon must be nonnegative");
  }
  if (stop.max_iter < 0) {
    throw ParameterError("pursuit: max_iter must be positive (0 selects min(N, M))");
  }
}

int resolve_max_iter(const StopRule& stop, const Dictionary& dict) {
  return stop.max_iter > 0 ? stop.max_iter : std::min(dict.n(), dict.m());
}

std::vector<int> selectable_indices(const Dictionary& dict) {
  std::vector<int> indices;
  indices.reserve(static_cast<std::size_t>(dict.m()));
  for (int j = 0; j < dict.m(); ++j) {
    if (!dict.is_degenerate(j)) {
      indices.push_back(j);
    }
  }
  return indices;
}

void erase_index(std::vector<int>& sorted, int value) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), value);
  if (it != sorted.end() && *it == value) {
    sorted.erase(it);
  }
}

PursuitResult empty_result(int n, double y_norm, Termination term) {
  PursuitResult result;
  result.basis = Mat::with_zero_cols(n);
  result.residual_norms = {y_norm};
  result.termination = term;
  return result;
}

// Projects `atom` orthogonal to every basis column and normalizes. One extra
// pass when cancellation ate more than kReorthRatio of the norm, which is
// where classical Gram-Schmidt starts losing orthogonality.
std::optional<Vec> orthonormalize_against(std::span<const double> atom, const Mat& basis) {
  Vec w(atom.begin(), atom.end());
  const double pre = norm2(w);
  for (int j = 0; j < basis.cols(); ++j) {
    axpy_inplace(-dot(basis.col(j), w), basis.col(j), w);
  }
  double post = norm2(w);
  if (post < kReorthRatio * pre) {
    for (int j = 0; j < basis.cols(); ++j) {
      axpy_inplace(-dot(basis.col(j), w), basis.col(j), w);
    }
    post = norm2(w);
  }
  if (post < kDegeneracyTol) {
    return std::nullopt;
  }
  for (double& v : w) {
    v /= post;
  }
  return w;
}

}  // namespace

PursuitResult omp_incremental(const Dictionary& dict, const Vec& y, const StopRule& stop,
                              const IterationObserver& observer) {
  validate_inputs(dict, y, stop);
  const double y_norm = norm2(y);
  if (y_norm == 0.0) {
    return empty_result(dict.n(), 0.0, Termination::epsilon_reached);
  }

  const int max_iter = resolve_max_iter(stop, dict);
  PursuitResult result;
  result.basis = Mat::with_zero_cols(dict.n());
  result.residual_norms = {y_norm};
  Vec r = y;
  std::vector<int> remaining = selectable_indices(dict);

  while (true) {
    if (result.residual_norms.back() < stop.epsilon) {
      result.termination = Termination::epsilon_reached;
      break;
    }
    if (result.iterations >= max_iter) {
      result.termination = Termination::max_iter;
      break;
    }

    // Selection against the original atoms; atoms that collapse into the span
    // of the basis are dropped and selection retried.
    int chosen = -1;
    double correlation = 0.0;
    Vec psi;
    while (true) {
      const auto sel = select_max_correlation(dict.atoms, remaining, r);
      if (!sel) {
        result.termination = Termination::exhausted_atoms;
        return result;
      }
      auto w = orthonormalize_against(dict.atoms.col(sel->index), result.basis);
      if (!w) {
        erase_index(remaining, sel->index);
        continue;
      }
      chosen = sel->index;
      correlation = sel->correlation;
      psi = std::move(*w);
      break;
    }

    const double z_t = dot(r, psi);
    Vec r_next = r;
    axpy_inplace(-z_t, psi, r_next);
    const double next_norm = norm2(r_next);
    if (stop.stall_tol > 0.0 &&
        (result.residual_norms.back() - next_norm) / y_norm < stop.stall_tol) {
      result.termination = Termination::stalled;
      break;
    }

    if (observer) {
      IterationView view;
      view.t = result.iterations + 1;
      view.chosen = chosen;
      view.correlation = correlation;
      view.residual = r;
      view.working_atoms = &dict.atoms;
      view.remaining = &remaining;
      view.basis = &result.basis;
      observer(view);
    }

    result.support.push_back(chosen);
    erase_index(remaining, chosen);
    result.basis.push_col(psi);
    result.z.push_back(z_t);
    r = std::move(r_next);
    result.residual_norms.push_back(next_norm);
    ++result.iterations;
  }
  return result;
}

namespace {

// One-step orthonormalization of every remaining working atom against the
// newest basis column. Atoms falling below the degeneracy floor are removed
// from the candidate set.
void sweep_remaining(Mat& work, std::vector<int>& remaining, std::span<const double> d) {
  std::vector<int> degenerate;
  for (int idx : remaining) {
    auto column = work.col(idx);
    axpy_inplace(-dot(d, column), d, column);
    const double remaining_norm = norm2(column);
    if (remaining_norm < kDegeneracyTol) {
      degenerate.push_back(idx);
      continue;
    }
    for (double& v : column) {
      v /= remaining_norm;
    }
  }
  for (int idx : degenerate) {
    erase_index(remaining, idx);
  }
}

// Recursive one-step sweeps keep the working set orthogonal to the whole
// basis in exact arithmetic; this audits the drift and re-projects fully when
// it exceeds the bound.
void audit_working_set(Mat& work, std::vector<int>& remaining, const Mat& basis) {
  double worst = 0.0;
  for (int idx : remaining) {
    for (int j = 0; j < basis.cols(); ++j) {
      worst = std::max(worst, std::abs(dot(work.col(idx), basis.col(j))));
    }
  }
  if (worst <= kOrthoAuditTol) {
    return;
  }
  std::vector<int> degenerate;
  for (int idx : remaining) {
    auto w = orthonormalize_against(work.col(idx), basis);
    if (!w) {
      degenerate.push_back(idx);
      continue;
    }
    std::copy(w->begin(), w->end(), work.col(idx).begin());
  }
  for (int idx : degenerate) {
    erase_index(remaining, idx);
  }
}

}  // namespace

PursuitResult eomp(const Dictionary& dict, const Vec& y, const StopRule& stop,
                   const IterationObserver& observer) {
  validate_inputs(dict, y, stop);
  const double y_norm = norm2(y);
  if (y_norm == 0.0) {
    return empty_result(dict.n(), 0.0, Termination::epsilon_reached);
  }

  const int max_iter = resolve_max_iter(stop, dict);
  PursuitResult result;
  result.basis = Mat::with_zero_cols(dict.n());
  result.residual_norms = {y_norm};
  Vec r = y;
  Mat work = dict.atoms;  // private working copy, destroyed by the sweeps
  std::vector<int> remaining = selectable_indices(dict);

  while (true) {
    if (result.residual_norms.back() < stop.epsilon) {
      result.termination = Termination::epsilon_reached;
      break;
    }
    if (result.iterations >= max_iter) {
      result.termination = Termination::max_iter;
      break;
    }

    if (result.iterations >= 1) {
      sweep_remaining(work, remaining, result.basis.col(result.basis.cols() - 1));
      if (result.iterations % kOrthoAuditPeriod == 0) {
        audit_working_set(work, remaining, result.basis);
      }
    }

    const auto sel = select_max_correlation(work, remaining, r);
    if (!sel) {
      result.termination = Termination::exhausted_atoms;
      break;
    }
    // The working atom is already orthonormal to the basis; renormalize once
    // against rounding in the first iteration where it is the raw atom.
    Vec psi(work.col(sel->index).begin(), work.col(sel->index).end());
    const double psi_norm = norm2(psi);
    for (double& v : psi) {
      v /= psi_norm;
    }

    const double z_t = dot(r, psi);
    Vec r_next = r;
    axpy_inplace(-z_t, psi, r_next);
    const double next_norm = norm2(r_next);
    if (stop.stall_tol > 0.0 &&
        (result.residual_norms.back() - next_norm) / y_norm < stop.stall_tol) {
      result.termination = Termination::stalled;
      break;
    }

    if (observer) {
      IterationView view;
      view.t = result.iterations + 1;
      view.chosen = sel->index;
      view.correlation = sel->correlation;
      view.residual = r;
      view.working_atoms = &work;
      view.remaining = &remaining;
      view.basis = &result.basis;
      observer(view);
    }

    result.support.push_back(sel->index);
    erase_index(remaining, sel->index);
    result.basis.push_col(psi);
    result.z.push_back(z_t);
    r = std::move(r_next);
    result.residual_norms.push_back(next_norm);
    ++result.iterations;
  }
  return result;
}

PursuitResult omp_ls_oracle(const Dictionary& dict, const Vec& y, const StopRule& stop) {
  validate_inputs(dict, y, stop);
  const double y_norm = norm2(y);
  if (y_norm == 0.0) {
    return empty_result(dict.n(), 0.0, Termination::epsilon_reached);
  }

  const int max_iter = resolve_max_iter(stop, dict);
  PursuitResult result;
  result.basis = Mat::with_zero_cols(dict.n());
  result.residual_norms = {y_norm};
  Vec r = y;
  std::vector<int> remaining = selectable_indices(dict);
  Vec coefficients;

  while (true) {
    if (result.residual_norms.back() < stop.epsilon) {
      result.termination = Termination::epsilon_reached;
      break;
    }
    if (result.iterations >= max_iter) {
      result.termination = Termination::max_iter;
      break;
    }

    int chosen = -1;
    Vec x_candidate;
    while (true) {
      const auto sel = select_max_correlation(dict.atoms, remaining, r);
      if (!sel) {
        result.termination = Termination::exhausted_atoms;
        if (!coefficients.empty()) {
          result.x = coefficients;
        }
        return result;
      }
      std::vector<int> candidate_support = result.support;
      candidate_support.push_back(sel->index);
      try {
        x_candidate = least_squares(select_columns(dict.atoms, candidate_support), y);
      } catch (const SingularityError&) {
        erase_index(remaining, sel->index);
        continue;
      }
      chosen = sel->index;
      break;
    }

    std::vector<int> new_support = result.support;
    new_support.push_back(chosen);
    Vec approx = matvec(select_columns(dict.atoms, new_support), x_candidate);
    Vec r_next(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      r_next[i] = y[i] - approx[i];
    }
    const double next_norm = norm2(r_next);
    if (stop.stall_tol > 0.0 &&
        (result.residual_norms.back() - next_norm) / y_norm < stop.stall_tol) {
      result.termination = Termination::stalled;
      break;
    }

    result.support = std::move(new_support);
    erase_index(remaining, chosen);
    coefficients = std::move(x_candidate);
    r = std::move(r_next);
    result.residual_norms.push_back(next_norm);
    ++result.iterations;
  }
  if (!coefficients.empty()) {
    result.x = coefficients;
  }
  return result;
}

Vec refit(const Dictionary& dict, const std::vector<int>& support, const Vec& y) {
  if (support.empty()) {
    throw ParameterError("refit: support is empty");
  }
  if (static_cast<int>(y.size()) != dict.n()) {
    throw DimensionError("refit: observation length does not match dictionary rows");
  }
  return least_squares(select_columns(dict.atoms, support), y);
}

PursuitResult run_pursuit(PursuitAlgo algo, const Dictionary& dict, const Vec& y,
                          const StopRule& stop) {
  switch (algo) {
    case PursuitAlgo::omp: return omp_incremental(dict, y, stop);
    case PursuitAlgo::eomp: return eomp(dict, y, stop);
    case PursuitAlgo::omp_ls: return omp_ls_oracle(dict, y, stop);
  }
  throw ParameterError("run_pursuit: unknown algorithm");
}

bool max_reduction_check(const Dictionary& dict, const Vec& y, int iterations, PursuitAlgo algo) {
  if (algo == PursuitAlgo::omp_ls) {
    throw ParameterError("max_reduction_check: only omp and eomp choices are checkable");
  }
  bool maximal = true;
  const auto observer = [&](const IterationView& view) {
    // Reduction a candidate would achieve: orthonormalize it against the
    // basis (already done for eOMP's working set), apply it, and measure the
    // norm of the change explicitly.
    const double slack = 1e-12 * norm2(view.residual);
    double chosen_reduction = -1.0;
    double best_alternative = -1.0;
    for (int idx : *view.remaining) {
      Vec psi;
      if (algo == PursuitAlgo::eomp) {
        psi.assign(view.working_atoms->col(idx).begin(), view.working_atoms->col(idx).end());
      } else {
        auto w = orthonormalize_against(view.working_atoms->col(idx), *view.basis);
        if (!w) {
          continue;
        }
        psi = std::move(*w);
      }
      const double z = dot(view.residual, psi);
      Vec delta(psi.size());
      for (std::size_t i = 0; i < psi.size(); ++i) {
        delta[i] = z * psi[i];
      }
      const double reduction = norm2(delta);
      if (idx == view.chosen) {
        chosen_reduction = reduction;
      } else {
        best_alternative = std::max(best_alternative, reduction);
      }
    }
    if (chosen_reduction + slack < best_alternative) {
      maximal = false;
    }
  };

  StopRule stop;
  stop.epsilon = 0.0;
  stop.max_iter = iterations;
  if (algo == PursuitAlgo::eomp) {
    eomp(dict, y, stop, observer);
  } else {
    omp_incremental(dict, y, stop, observer);
  }
  return maximal;
}

}  // namespace eomp
