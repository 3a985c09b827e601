#include "ddprice/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace ddprice {

namespace {

// Samples are processed in fixed-size chunks; chunk partial sums are combined
// by a balanced pairwise tree in chunk order.  The float result therefore
// depends only on (batch, kChunk), never on thread count or scheduling.
constexpr long kChunk = 256;

struct ChunkSum {
  Vec vec;
  double scalar = 0.0;
};

ChunkSum reduce_chunks(std::vector<ChunkSum> level) {
  while (level.size() > 1) {
    std::vector<ChunkSum> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      ChunkSum merged = std::move(level[i]);
      const ChunkSum& rhs = level[i + 1];
      for (std::size_t d = 0; d < merged.vec.size(); ++d) merged.vec[d] += rhs.vec[d];
      merged.scalar += rhs.scalar;
      next.push_back(std::move(merged));
    }
    if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
    level = std::move(next);
  }
  return std::move(level.front());
}

// Runs add_sample(ell, vec_acc, scalar_acc) for ell in [0, batch) and returns
// the deterministic total.
template <typename AddSample>
ChunkSum accumulate_batch(long batch, std::size_t vec_dim, int n_threads,
                          const AddSample& add_sample) {
  if (batch < 1) throw std::invalid_argument("batch size must be >= 1");
  const long n_chunks = (batch + kChunk - 1) / kChunk;
  std::vector<ChunkSum> sums(static_cast<std::size_t>(n_chunks));

  auto run_chunk = [&](long c) {
    ChunkSum acc;
    acc.vec.assign(vec_dim, 0.0);
    const long lo = c * kChunk;
    const long hi = std::min(batch, lo + kChunk);
    for (long ell = lo; ell < hi; ++ell) add_sample(ell, acc.vec, acc.scalar);
    sums[static_cast<std::size_t>(c)] = std::move(acc);
  };

  if (n_threads <= 1 || n_chunks == 1) {
    for (long c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
      try {
        for (;;) {
          const long c = next.fetch_add(1);
          if (c >= n_chunks) return;
          run_chunk(c);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    };
    std::vector<std::thread> pool;
    const int width = static_cast<int>(std::min<long>(n_threads, n_chunks));
    pool.reserve(static_cast<std::size_t>(width));
    for (int t = 0; t < width; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  return reduce_chunks(std::move(sums));
}

}  // namespace

Vec score_gradient(const ProblemModel& model, const Vec& x, const Vec& xi, double delta) {
  const double f = model.objective(x, xi);
  Vec g = model.objective_grad_x(x, xi);
  const Vec s = model.score(x, xi);
  const double w = f - delta;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += w * s[i];
  if (!all_finite(g))
    throw NumericError("score_gradient: non-finite gradient contribution at model '" +
                       model.name() + "'");
  return g;
}

GradientEstimate minibatch_gradient(const ProblemModel& model, const Vec& x, double delta,
                                    long batch, const StreamFamily& streams,
                                    std::uint64_t iteration, int n_threads) {
  const std::size_t n = model.dim();
  require_dim(x, n, "minibatch_gradient");
  const ChunkSum total = accumulate_batch(
      batch, n, n_threads, [&](long ell, Vec& vec_acc, double& scalar_acc) {
        RngStream rng = streams.stream(iteration, static_cast<std::uint64_t>(ell));
        const Vec xi = model.sample_one(x, rng);
        const Vec g = score_gradient(model, x, xi, delta);
        for (std::size_t d = 0; d < n; ++d) vec_acc[d] += g[d];
        scalar_acc += model.objective(x, xi);
      });
  GradientEstimate est;
  est.g = scale(total.vec, 1.0 / static_cast<double>(batch));
  est.batch_mean_f = total.scalar / static_cast<double>(batch);
  est.batch_size = batch;
  return est;
}

GradientEstimate specialized_gradient(const MultiAgentProblemModel& model, const Vec& x,
                                      double delta, long batch, const StreamFamily& streams,
                                      std::uint64_t iteration, int n_threads) {
  const std::size_t n = model.dim();
  const std::size_t actions = model.action_count();
  require_dim(x, n, "specialized_gradient");
  const ChunkSum total = accumulate_batch(
      batch, actions, n_threads, [&](long ell, Vec& vec_acc, double& scalar_acc) {
        RngStream rng = streams.stream(iteration, static_cast<std::uint64_t>(ell));
        const Vec xi = model.sample_one(x, rng);
        const double c = model.cost(xi);
        const Vec phi = model.phi_score(x, xi);
        const double w = c - delta;
        for (std::size_t a = 0; a < actions; ++a) vec_acc[a] += w * phi[a];
        scalar_acc += c;
      });

  const double inv = 1.0 / static_cast<double>(batch);
  Vec weighted = scale(total.vec, inv);
  Vec g = model.action_prob_jacobian(x).apply(weighted);
  const Vec sales_grad = model.sales_grad_at_mean(x);
  for (std::size_t d = 0; d < n; ++d) g[d] -= sales_grad[d];
  if (!all_finite(g))
    throw NumericError("specialized_gradient: non-finite gradient at model '" + model.name() +
                       "'");
  GradientEstimate est;
  est.g = std::move(g);
  est.batch_mean_f = total.scalar * inv;
  est.batch_size = batch;
  return est;
}

BaselineState ogd_update(const BaselineState& state, double v, double zeta) {
  if (!(zeta > 0.0 && zeta <= 1.0))
    throw std::invalid_argument("ogd_update: zeta must lie in (0, 1]");
  BaselineState next;
  next.delta = (1.0 - zeta) * state.delta + zeta * v;
  next.k = state.k + 1;
  return next;
}

double mc_mean_objective(const ProblemModel& model, const Vec& x, long count,
                         const StreamFamily& streams, std::uint64_t iteration, int n_threads) {
  require_dim(x, model.dim(), "mc_mean_objective");
  const ChunkSum total =
      accumulate_batch(count, 0, n_threads, [&](long ell, Vec&, double& scalar_acc) {
        RngStream rng = streams.stream(iteration, static_cast<std::uint64_t>(ell));
        const Vec xi = model.sample_one(x, rng);
        scalar_acc += model.objective(x, xi);
      });
  const double out = total.scalar / static_cast<double>(count);
  if (!std::isfinite(out))
    throw NumericError("mc_mean_objective: non-finite objective average at model '" +
                       model.name() + "'");
  return out;
}

}  // namespace ddprice
