#include <algorithm>
#include <cmath>
#include <numeric>

#include "ascent.hpp"
#include "sectorial/error.hpp"
#include "sectorial/linalg.hpp"
#include "sectorial/rademacher.hpp"
#include "sectorial/serialize.hpp"

namespace sectorial {

namespace {

using detail::Denominator;
using detail::Patterns;
using detail::Slots;

using Selection = std::vector<std::size_t>;

double binomial(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 0; i < k; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return c;
}

// All n-subsets when there are at most `cap` of them; otherwise the n members
// of largest norm plus seeded random subsets.
std::vector<Selection> choose_selections(const std::vector<double>& norms, std::size_t n, int cap,
                                         std::uint64_t seed) {
  const std::size_t F = norms.size();
  std::vector<Selection> out;
  if (binomial(F, n) <= static_cast<double>(std::max(cap, 1))) {
    Selection s(n);
    std::iota(s.begin(), s.end(), 0);
    while (true) {
      out.push_back(s);
      std::size_t i = n;
      while (i > 0 && s[i - 1] == F - n + i - 1) --i;
      if (i == 0) break;
      ++s[i - 1];
      for (std::size_t j = i; j < n; ++j) s[j] = s[j - 1] + 1;
    }
    return out;
  }
  std::vector<std::size_t> order(F);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });
  Selection top(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n));
  std::sort(top.begin(), top.end());
  out.push_back(top);
  for (int i = 1; i < cap; ++i) {
    Rng rng = make_stream(seed ^ 0x5e1ec7ull, static_cast<std::uint64_t>(i));
    std::vector<std::size_t> idx(F);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    Selection s(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n));
    std::sort(s.begin(), s.end());
    out.push_back(s);
  }
  return out;
}

json columns_to_json(const Matrix& X) {
  json a = json::array();
  for (Eigen::Index c = 0; c < X.cols(); ++c) a.push_back(vector_to_json(X.col(c)));
  return a;
}

json patterns_to_json(const Patterns& P, const SignConfig& sign) {
  return {{"exhaustive", P.exhaustive}, {"patterns", P.S.rows()}, {"seed", sign.seed}};
}

struct Job {
  std::size_t selection = 0;
  int start = 0;  // < 0: norm-attaining start for member -start-1 of the selection
};

struct Candidate {
  double value = -1.0;
  Matrix X, Y;
  std::size_t job = 0;
};

Candidate best_of(const std::vector<Candidate>& results) {
  Candidate best;
  for (const Candidate& c : results)
    if (c.value > best.value) best = c;
  return best;
}

BoundEstimate family_bound(const OperatorFamily& family, int n, const SignConfig& sign, const SearchConfig& search,
                           BoundKind kind) {
  require(n >= 1, Errc::InvalidArgument, "selection length must be at least 1");
  const NormSpec& norm = family.norm();
  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(n), family.size());
  const std::vector<Selection> selections =
      choose_selections(family.member_norms(), m, search.selection_cap, search.seed);
  const Patterns P = detail::single_patterns(static_cast<int>(m), sign);
  const Denominator den = kind == BoundKind::U ? Denominator::Max : Denominator::Rad;
  const Eigen::Index d = family.dim();

  std::vector<OperatorNormResult> witnesses(family.size());
  parallel_for(family.size(), [&](std::size_t k) { witnesses[k] = operator_norm(family.members()[k], norm); });

  std::vector<Job> jobs;
  for (std::size_t s = 0; s < selections.size(); ++s) {
    for (std::size_t b = 0; b < m; ++b) jobs.push_back({s, -static_cast<int>(b) - 1});
    for (int st = 0; st < search.starts; ++st) jobs.push_back({s, st});
  }

  std::vector<Candidate> results(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t j) {
    const Job& job = jobs[j];
    const Selection& sel = selections[job.selection];
    Slots T(m);
    for (std::size_t b = 0; b < m; ++b) T[b] = family.members()[sel[b]];
    Matrix X = Matrix::Zero(d, static_cast<Eigen::Index>(m));
    Matrix Y = Matrix::Zero(d, static_cast<Eigen::Index>(m));
    if (job.start < 0) {
      const auto b = static_cast<Eigen::Index>(-job.start - 1);
      const Vector& w = witnesses[sel[static_cast<std::size_t>(b)]].witness;
      X.col(b) = w;
      Y.col(b) = norm.dual_vector(T[static_cast<std::size_t>(b)] * w);
      if (Y.col(b).norm() == 0.0) Y.col(b) = norm.dual_vector(w);
    } else {
      Rng rng = make_stream(detail::mix_seed(search.seed, sel), static_cast<std::uint64_t>(job.start));
      X = complex_gaussian(d, static_cast<Eigen::Index>(m), rng);
      Y = complex_gaussian(d, static_cast<Eigen::Index>(m), rng);
    }
    detail::AscentResult r = kind == BoundKind::R ? detail::ascend_r(T, norm, P, X, search.steps)
                                                  : detail::ascend_w(T, norm, P, den, X, Y, search.steps);
    results[j] = {r.value, std::move(r.X), std::move(r.Y), j};
  });

  const Candidate best = best_of(results);
  const Selection& sel = selections[jobs[best.job].selection];
  BoundEstimate b;
  b.value = std::max(0.0, best.value);
  b.method = std::string(to_string(kind)) + "-bound-ascent";
  b.mode = P.exhaustive ? SearchMode::Exhaustive : SearchMode::Randomized;
  b.seed = search.seed;
  b.samples = jobs.size();
  b.is_lower_bound = true;
  b.witness = {{"selection", sel}, {"x", columns_to_json(best.X)}, {"signs", patterns_to_json(P, sign)}};
  if (kind != BoundKind::R) b.witness["x_star"] = columns_to_json(best.Y);
  b.details = {{"n", m},
               {"selections", selections.size()},
               {"starts", search.starts},
               {"steps", search.steps},
               {"uniform_bound", family.uniform_bound()},
               {"norm", norm_to_json(norm)}};
  return b;
}

}  // namespace

BoundEstimate r_bound(const OperatorFamily& family, int n, const SignConfig& sign, const SearchConfig& search) {
  return family_bound(family, n, sign, search, BoundKind::R);
}

BoundEstimate wr_bound(const OperatorFamily& family, int n, const SignConfig& sign, const SearchConfig& search) {
  return family_bound(family, n, sign, search, BoundKind::WR);
}

BoundEstimate u_bound(const OperatorFamily& family, int n, const SignConfig& sign, const SearchConfig& search) {
  return family_bound(family, n, sign, search, BoundKind::U);
}

namespace {

// (alpha): sup over x and |alpha_jk| <= 1 of Rad2(alpha x) / Rad2(x). The
// alpha search alternates vector ascent with a phase update of alpha.
BoundEstimate alpha_constant(const NormSpec& norm, int n, const Patterns& P, const SignConfig& sign,
                             const SearchConfig& search) {
  const auto m = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const Eigen::Index d = norm.dim();
  const int starts = std::max(1, search.starts);
  struct Result {
    double value = -1.0;
    Matrix X;
    std::vector<cplx> alpha;
  };
  std::vector<Result> results(static_cast<std::size_t>(starts));
  parallel_for(results.size(), [&](std::size_t st) {
    Rng rng = make_stream(detail::mix_seed(search.seed, {m, 0xa1u}), st);
    std::vector<cplx> alpha(m, 1.0);
    if (st > 0) {
      std::uniform_real_distribution<double> angle(-pi, pi);
      std::bernoulli_distribution coin(0.5);
      for (auto& a : alpha) a = st % 2 == 1 ? cplx(coin(rng) ? 1.0 : -1.0) : std::polar(1.0, angle(rng));
    }
    auto slots = [&](const std::vector<cplx>& al) {
      Slots T(m);
      for (std::size_t b = 0; b < m; ++b) T[b] = al[b] * Matrix::Identity(d, d);
      return T;
    };
    Matrix X = complex_gaussian(d, static_cast<Eigen::Index>(m), rng);
    detail::AscentResult r = detail::ascend_r(slots(alpha), norm, P, X, search.steps);
    for (int round = 0; round < 3 && r.value > 0.0; ++round) {
      // Linearize the numerator at the current point and align each phase.
      Matrix AX = r.X;
      for (std::size_t b = 0; b < m; ++b) AX.col(static_cast<Eigen::Index>(b)) *= alpha[b];
      const detail::NormValue g = detail::rad_with_gradient(AX, P, norm);
      std::vector<cplx> next = alpha;
      for (std::size_t b = 0; b < m; ++b) {
        const auto bi = static_cast<Eigen::Index>(b);
        const cplx c = g.gradient.col(bi).dot(r.X.col(bi));
        if (std::abs(c) > 0.0) next[b] = std::conj(c) / std::abs(c);
      }
      detail::AscentResult trial = detail::ascend_r(slots(next), norm, P, r.X, search.steps);
      if (!(trial.value > r.value)) break;
      r = std::move(trial);
      alpha = std::move(next);
    }
    results[st] = {r.value, std::move(r.X), std::move(alpha)};
  });
  std::size_t arg = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].value > results[arg].value) arg = i;
  BoundEstimate b;
  b.value = std::max(0.0, results[arg].value);
  b.method = "alpha-property-ascent";
  b.mode = P.exhaustive ? SearchMode::Exhaustive : SearchMode::Randomized;
  b.seed = search.seed;
  b.samples = static_cast<std::uint64_t>(starts);
  json a = json::array();
  for (const cplx z : results[arg].alpha) a.push_back(complex_to_json(z));
  b.witness = {{"x", columns_to_json(results[arg].X)}, {"alpha", a}, {"signs", patterns_to_json(P, sign)}};
  return b;
}

BoundEstimate slot_bound(const NormSpec& norm, int n, const Patterns& P, const SignConfig& sign,
                         const SearchConfig& search, const Slots& T, bool pairing, const char* method) {
  const auto m = T.size();
  const Eigen::Index d = norm.dim();
  const int starts = std::max(1, search.starts);
  std::vector<detail::AscentResult> results(static_cast<std::size_t>(starts) + 1);
  parallel_for(results.size(), [&](std::size_t st) {
    Matrix X = Matrix::Zero(d, static_cast<Eigen::Index>(m));
    Matrix Y = Matrix::Zero(d, static_cast<Eigen::Index>(m));
    if (st == 0) {
      // Single term at slot (0, 0): attains 1.
      X(0, 0) = 1.0;
      Y.col(0) = norm.dual_vector(X.col(0));
    } else {
      Rng rng = make_stream(detail::mix_seed(search.seed, {m, pairing ? 0xa2u : 0xd3u}), st);
      X = complex_gaussian(d, static_cast<Eigen::Index>(m), rng);
      Y = complex_gaussian(d, static_cast<Eigen::Index>(m), rng);
    }
    results[st] = pairing ? detail::ascend_w(T, norm, P, Denominator::Rad, X, Y, search.steps)
                          : detail::ascend_r(T, norm, P, X, search.steps);
  });
  std::size_t arg = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].value > results[arg].value) arg = i;
  BoundEstimate b;
  b.value = std::max(0.0, results[arg].value);
  b.method = method;
  b.mode = P.exhaustive ? SearchMode::Exhaustive : SearchMode::Randomized;
  b.seed = search.seed;
  b.samples = results.size();
  b.witness = {{"x", columns_to_json(results[arg].X)}, {"signs", patterns_to_json(P, sign)}, {"n", n}};
  if (pairing) b.witness["x_star"] = columns_to_json(results[arg].Y);
  return b;
}

}  // namespace

PropertyConstants property_constants(const NormSpec& norm, int n, const SignConfig& sign,
                                     const SearchConfig& search) {
  require(n >= 1, Errc::InvalidArgument, "n must be at least 1");
  const Patterns P = detail::double_patterns(n, sign);
  const auto m = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const Eigen::Index d = norm.dim();
  Slots identity(m);
  Slots triangle(m);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      triangle[static_cast<std::size_t>(j) * n + k] = k <= j ? Matrix(Matrix::Identity(d, d)) : Matrix(Matrix::Zero(d, d));
  PropertyConstants out;
  out.alpha = alpha_constant(norm, n, P, sign, search);
  out.A = slot_bound(norm, n, P, sign, search, identity, true, "A-property-ascent");
  out.Delta = slot_bound(norm, n, P, sign, search, triangle, false, "Delta-property-ascent");
  return out;
}

}  // namespace sectorial
