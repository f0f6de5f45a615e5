#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "eomp/dictionary.hpp"

namespace eomp {

// Termination control. epsilon is an absolute L2 threshold on the residual;
// callers with a relative target convert against ||y|| themselves.
struct StopRule {
  double epsilon = 0.0;
  int max_iter = 0;       // 0 means min(N, M)
  double stall_tol = 1e-12;  // relative reduction floor; <= 0 disables stalling
};

enum class Termination { epsilon_reached, max_iter, stalled, exhausted_atoms };
const char* to_string(Termination t);

struct PursuitResult {
  std::vector<int> support;           // atom indices in selection order
  Mat basis;                          // orthonormalized chosen atoms, one column per iteration
  Vec z;                              // coefficients w.r.t. basis
  std::optional<Vec> x;               // coefficients w.r.t. the original atoms, when refit
  std::vector<double> residual_norms; // iterations+1 entries, starting at ||y||
  Termination termination = Termination::epsilon_reached;
  int iterations = 0;
};

// Snapshot handed to an observer right before an iteration commits: the
// residual entering the iteration, the candidate set and working atoms after
// the orthonormalization sweep, the basis built so far, and the pick.
// Diagnostics only; everything points into solver state, do not retain.
struct IterationView {
  int t = 0;  // 1-based
  int chosen = -1;
  double correlation = 0.0;
  std::span<const double> residual;
  const Mat* working_atoms = nullptr;
  const std::vector<int>* remaining = nullptr;
  const Mat* basis = nullptr;
};
using IterationObserver = std::function<void(const IterationView&)>;

inline constexpr double kDegeneracyTol = 1e-10;  // pre-normalization norm floor
inline constexpr double kUnitNormTol = 1e-8;     // contract check on the unit vector
inline constexpr double kReorthRatio = 0.7;      // cancellation ratio forcing a second pass
inline constexpr int kOrthoAuditPeriod = 32;     // working-set audit cadence
inline constexpr double kOrthoAuditTol = 1e-6;

// normalize(psi - <d,psi> d); nullopt when the projection norm falls below
// kDegeneracyTol (psi lies in the span of the chosen set). d must be unit norm
// to within kUnitNormTol or ContractError is thrown.
std::optional<Vec> gram_schmidt_step(std::span<const double> psi, std::span<const double> d);

struct Selection {
  int index = -1;
  double correlation = 0.0;
};

// Candidate maximizing |<atom, r>|; ties go to the lowest index. nullopt when
// the candidate set is empty (atoms exhausted).
std::optional<Selection> select_max_correlation(const Mat& atoms,
                                                const std::vector<int>& candidates,
                                                std::span<const double> r);

// OMP with incremental orthonormalization of the chosen atoms: selection by
// correlation with the original atoms, one Gram-Schmidt step per basis column
// on the chosen atom (second pass when cancellation exceeds kReorthRatio),
// coefficient by projection, residual updated in place.
PursuitResult omp_incremental(const Dictionary& dict, const Vec& y, const StopRule& stop,
                              const IterationObserver& observer = {});

// eOMP: from the second iteration on, every remaining atom is orthonormalized
// in place against the newest basis column before selection, so selection by
// correlation picks the atom with the largest achievable residual reduction.
PursuitResult eomp(const Dictionary& dict, const Vec& y, const StopRule& stop,
                   const IterationObserver& observer = {});

// Textbook OMP: selection by correlation with the original atoms, coefficients
// by a fresh least-squares solve over all chosen atoms, residual recomputed
// from it. Reference baseline; fills x instead of (basis, z).
PursuitResult omp_ls_oracle(const Dictionary& dict, const Vec& y, const StopRule& stop);

// Least-squares coefficients of y over the original atoms of `support`.
Vec refit(const Dictionary& dict, const std::vector<int>& support, const Vec& y);

enum class PursuitAlgo { omp, eomp, omp_ls };
const char* to_string(PursuitAlgo algo);
std::optional<PursuitAlgo> parse_algo(std::string_view name);
PursuitResult run_pursuit(PursuitAlgo algo, const Dictionary& dict, const Vec& y,
                          const StopRule& stop);

// Runs `algo` for up to `iterations` steps and verifies, by trying every
// remaining non-degenerate atom, that each committed choice achieves the
// maximal residual reduction. True for eOMP by construction; OMP can fail it.
bool max_reduction_check(const Dictionary& dict, const Vec& y, int iterations,
                  PursuitAlgo algo = PursuitAlgo::eomp);

}  // namespace eomp
