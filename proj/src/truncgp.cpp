#include "ddprice/models/truncgp.hpp"

#include <algorithm>
#include <cmath>

#include "ddprice/models/multiproduct.hpp"  // piecewise_cost
#include "ddprice/stats.hpp"

namespace ddprice {

namespace {

/// Lower-triangular Cholesky factor of an SPD matrix.
Matrix cholesky(const Matrix& k) {
  const std::size_t n = k.rows();
  Matrix l(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = k(i, j);
      for (std::size_t t = 0; t < j; ++t) acc -= l(i, t) * l(j, t);
      if (i == j) {
        if (!(acc > 0.0))
          throw NumericError("gp_fit: Gram matrix is not positive definite (pivot " +
                             std::to_string(i) + " = " + std::to_string(acc) + ")");
        l(i, i) = std::sqrt(acc);
      } else {
        l(i, j) = acc / l(j, j);
      }
    }
  }
  return l;
}

/// Solves (L L') y = b.
Vec chol_solve(const Matrix& l, Vec b) {
  const std::size_t n = l.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = b[i];
    for (std::size_t t = 0; t < i; ++t) acc -= l(i, t) * b[t];
    b[i] = acc / l(i, i);
  }
  for (std::size_t ri = n; ri-- > 0;) {
    double acc = b[ri];
    for (std::size_t t = ri + 1; t < n; ++t) acc -= l(t, ri) * b[t];
    b[ri] = acc / l(ri, ri);
  }
  return b;
}

double sq_dist(const Vec& a, const Vec& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return acc;
}

}  // namespace

GpPosterior gp_fit(const std::vector<Vec>& train_x, const Vec& targets, double theta1,
                   double theta2, double noise) {
  const std::size_t n = train_x.size();
  if (n == 0) throw std::invalid_argument("gp_fit: need at least one training point");
  if (targets.size() != n)
    throw std::invalid_argument("gp_fit: one target per training input required");
  if (!(theta1 > 0.0) || !(theta2 > 0.0))
    throw std::invalid_argument("gp_fit: kernel parameters must be positive");
  if (!(noise >= 0.0)) throw std::invalid_argument("gp_fit: noise must be nonnegative");

  Matrix gram(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (train_x[j].size() != train_x[0].size())
      throw std::invalid_argument("gp_fit: training inputs must share a dimension");
    for (std::size_t l = 0; l <= j; ++l) {
      const double kv = theta1 * std::exp(-sq_dist(train_x[j], train_x[l]) / theta2);
      gram(j, l) = kv;
      gram(l, j) = kv;
    }
    gram(j, j) += noise;
  }

  const Matrix l = cholesky(gram);
  GpPosterior post;
  post.A = Matrix(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    Vec e(n, 0.0);
    e[col] = 1.0;
    const Vec sol = chol_solve(l, std::move(e));
    for (std::size_t row = 0; row < n; ++row) post.A(row, col) = sol[row];
  }
  // Symmetrize against round-off.
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r + 1; c < n; ++c) {
      const double s = 0.5 * (post.A(r, c) + post.A(c, r));
      post.A(r, c) = s;
      post.A(c, r) = s;
    }
  post.a = chol_solve(l, targets);
  return post;
}

void TruncGpSpec::validate() const {
  if (item.empty()) throw std::invalid_argument("TruncGpSpec: need at least one item");
  if (train_x.empty()) throw std::invalid_argument("TruncGpSpec: need training inputs");
  if (!(var_floor > 0.0)) throw std::invalid_argument("TruncGpSpec: var_floor must be positive");
  if (!(x_min < x_max)) throw std::invalid_argument("TruncGpSpec: require x_min < x_max");
  const std::size_t n = item.size();
  const std::size_t train = train_x.size();
  for (const Vec& xt : train_x) {
    if (xt.size() != n)
      throw std::invalid_argument("TruncGpSpec: training inputs must have one slot per item");
    for (double v : xt)
      if (!(v >= x_min && v <= x_max))
        throw std::invalid_argument("TruncGpSpec: training inputs must lie in the price box");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const TruncGpItem& it = item[i];
    if (!(it.theta1 > 0.0) || !(it.theta2 > 0.0) || !(it.sigma > 0.0) || !(it.xi_max > 0.0))
      throw std::invalid_argument("TruncGpSpec: item " + std::to_string(i) +
                                  " needs positive theta1, theta2, sigma, xi_max");
    if (it.a.size() != train || it.A.rows() != train || it.A.cols() != train)
      throw std::invalid_argument("TruncGpSpec: item " + std::to_string(i) +
                                  " posterior shapes must match the training set");
    if (!(it.cost_l >= 0.0 && it.cost_u >= it.cost_l))
      throw std::invalid_argument("TruncGpSpec: item " + std::to_string(i) +
                                  " requires 0 <= cost_l <= cost_u");
  }
}

TruncGpModel::TruncGpModel(TruncGpSpec spec) : spec_(std::move(spec)), box_(0.0, 1.0, 1) {
  spec_.validate();
  box_ = FeasibleBox(spec_.x_min, spec_.x_max, spec_.item.size());
}

Vec TruncGpModel::features(std::size_t i, const Vec& x) const {
  const TruncGpItem& it = spec_.item[i];
  Vec v(spec_.train_x.size());
  for (std::size_t j = 0; j < v.size(); ++j)
    v[j] = it.theta1 * std::exp(-sq_dist(x, spec_.train_x[j]) / it.theta2);
  return v;
}

TruncGpMarginal TruncGpModel::marginal(std::size_t i, const Vec& x) const {
  require_dim(x, dim(), "truncgp marginal");
  const TruncGpItem& it = spec_.item[i];
  const Vec v = features(i, x);
  const Vec w = it.A.apply(v);
  TruncGpMarginal m;
  m.mu = dot(v, it.a);
  const double raw = it.sigma * it.sigma - dot(v, w);
  m.clamped = raw < spec_.var_floor;
  m.var = m.clamped ? spec_.var_floor : raw;
  const double sd = std::sqrt(m.var);
  m.trunc_mass = normal_cdf((it.xi_max - m.mu) / sd) - normal_cdf((0.0 - m.mu) / sd);
  if (!(m.trunc_mass >= 1e-300))
    throw NumericError("truncgp: truncation mass underflow for item " + std::to_string(i) +
                       " (mu=" + std::to_string(m.mu) + ", var=" + std::to_string(m.var) +
                       ", xi_max=" + std::to_string(it.xi_max) + ")");
  return m;
}

double TruncGpModel::item_density(std::size_t i, const Vec& x, double q) const {
  const TruncGpItem& it = spec_.item[i];
  if (q < 0.0 || q > it.xi_max) return 0.0;
  const TruncGpMarginal m = marginal(i, x);
  const double sd = std::sqrt(m.var);
  return normal_pdf((q - m.mu) / sd) / (sd * m.trunc_mass);
}

double TruncGpModel::item_cdf(std::size_t i, const Vec& x, double q) const {
  const TruncGpItem& it = spec_.item[i];
  if (q <= 0.0) return 0.0;
  if (q >= it.xi_max) return 1.0;
  const TruncGpMarginal m = marginal(i, x);
  const double sd = std::sqrt(m.var);
  return (normal_cdf((q - m.mu) / sd) - normal_cdf((0.0 - m.mu) / sd)) / m.trunc_mass;
}

void TruncGpModel::check_sample(const Vec& xi) const {
  require_dim(xi, dim(), "truncgp demand sample");
  for (std::size_t i = 0; i < xi.size(); ++i)
    if (!(xi[i] >= 0.0 && xi[i] <= spec_.item[i].xi_max))
      throw std::invalid_argument("truncgp demand sample: coordinate " + std::to_string(i) +
                                  " outside [0, xi_max]");
}

double TruncGpModel::objective(const Vec& x, const Vec& xi) const {
  require_dim(x, dim(), "truncgp objective");
  check_sample(xi);
  double sales = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) sales += x[i] * xi[i];
  return -sales + cost(xi);
}

Vec TruncGpModel::objective_grad_x(const Vec& x, const Vec& xi) const {
  require_dim(x, dim(), "truncgp objective_grad_x");
  check_sample(xi);
  return scale(xi, -1.0);
}

Vec TruncGpModel::sample_one(const Vec& x, RngStream& rng) const {
  require_dim(x, dim(), "truncgp sample");
  Vec xi(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    const TruncGpMarginal m = marginal(i, x);
    const double sd = std::sqrt(m.var);
    const double lo = normal_cdf((0.0 - m.mu) / sd);
    double p = lo + rng.next_double() * m.trunc_mass;
    p = std::clamp(p, 1e-300, 1.0 - 1e-16);
    xi[i] = std::clamp(m.mu + sd * normal_quantile(p), 0.0, spec_.item[i].xi_max);
  }
  return xi;
}

Vec TruncGpModel::score(const Vec& x, const Vec& xi) const {
  require_dim(x, dim(), "truncgp score");
  check_sample(xi);
  Vec s(dim(), 0.0);
  for (std::size_t i = 0; i < dim(); ++i) {
    const TruncGpItem& it = spec_.item[i];
    const Vec v = features(i, x);
    const Vec w = it.A.apply(v);
    const double mu = dot(v, it.a);
    const double raw = it.sigma * it.sigma - dot(v, w);
    const bool clamped = raw < spec_.var_floor;
    const double h = clamped ? spec_.var_floor : raw;
    const double sd = std::sqrt(h);
    const double z_hi = (it.xi_max - mu) / sd;
    const double z_lo = (0.0 - mu) / sd;
    const double c = normal_cdf(z_hi) - normal_cdf(z_lo);
    if (!(c >= 1e-300))
      throw NumericError("truncgp: truncation mass underflow for item " + std::to_string(i));
    const double resid = xi[i] - mu;

    for (std::size_t k = 0; k < dim(); ++k) {
      // d v_j / d x_k = -2 (x_k - xhat_j_k) / theta2 * v_j
      double dv_a = 0.0, dv_w = 0.0;
      for (std::size_t j = 0; j < v.size(); ++j) {
        const double factor = -2.0 * (x[k] - spec_.train_x[j][k]) / it.theta2 * v[j];
        dv_a += factor * it.a[j];
        dv_w += factor * w[j];
      }
      const double dmu = dv_a;
      const double dh = clamped ? 0.0 : -2.0 * dv_w;

      const double dz_hi = -dmu / sd - z_hi * dh / (2.0 * h);
      const double dz_lo = -dmu / sd - z_lo * dh / (2.0 * h);
      const double dc = normal_pdf(z_hi) * dz_hi - normal_pdf(z_lo) * dz_lo;

      s[k] += -dc / c - dh / (2.0 * h) + (resid / h) * dmu +
              (resid * resid) / (2.0 * h * h) * dh;
    }
  }
  if (!all_finite(s)) throw NumericError("truncgp: non-finite score");
  return s;
}

double TruncGpModel::item_mean(std::size_t i, const Vec& x) const {
  const TruncGpItem& it = spec_.item[i];
  const TruncGpMarginal m = marginal(i, x);
  const double sd = std::sqrt(m.var);
  const double z_lo = (0.0 - m.mu) / sd;
  const double z_hi = (it.xi_max - m.mu) / sd;
  return m.mu + sd * (normal_pdf(z_lo) - normal_pdf(z_hi)) / m.trunc_mass;
}

double TruncGpModel::expected_objective(const Vec& x, double tol) const {
  require_dim(x, dim(), "truncgp expected_objective");
  double total = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    const TruncGpItem& it = spec_.item[i];
    total += -x[i] * item_mean(i, x);

    const TruncGpMarginal m = marginal(i, x);
    const double sd = std::sqrt(m.var);
    const auto weighted_cost = [&](double q) {
      return piecewise_cost(q, it.eta1, it.eta2, it.eta3, it.cost_l, it.cost_u) *
             normal_pdf((q - m.mu) / sd) / (sd * m.trunc_mass);
    };
    // Split at the cost kinks so the adaptive rule sees smooth pieces.
    Vec knots{0.0, std::clamp(it.cost_l, 0.0, it.xi_max), std::clamp(it.cost_u, 0.0, it.xi_max),
              it.xi_max};
    std::sort(knots.begin(), knots.end());
    for (std::size_t s = 0; s + 1 < knots.size(); ++s)
      if (knots[s + 1] > knots[s]) total += integrate(weighted_cost, knots[s], knots[s + 1], tol);
  }
  return total;
}

double TruncGpModel::log_prob(const Vec& x, const Vec& xi) const {
  require_dim(x, dim(), "truncgp log_prob");
  check_sample(xi);
  double lp = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    const TruncGpMarginal m = marginal(i, x);
    const double sd = std::sqrt(m.var);
    const double z = (xi[i] - m.mu) / sd;
    lp += -std::log(m.trunc_mass) - std::log(sd) - 0.5 * std::log(2.0 * M_PI) - 0.5 * z * z;
  }
  return lp;
}

double TruncGpModel::f_max_bound() const {
  const double x_abs = std::max(std::fabs(spec_.x_min), std::fabs(spec_.x_max));
  double total = 0.0;
  for (const TruncGpItem& it : spec_.item) {
    total += x_abs * it.xi_max;
    double worst = 0.0;
    for (double q : {0.0, it.cost_l, it.cost_u, it.xi_max}) {
      q = std::clamp(q, 0.0, it.xi_max);
      worst = std::max(worst,
                       std::fabs(piecewise_cost(q, it.eta1, it.eta2, it.eta3, it.cost_l,
                                               it.cost_u)));
    }
    total += worst;
  }
  return total;
}

double TruncGpModel::lipschitz_f() const {
  double xi_peak = 0.0;
  for (const TruncGpItem& it : spec_.item) xi_peak = std::max(xi_peak, it.xi_max);
  return static_cast<double>(dim()) * xi_peak;
}

double TruncGpModel::score_bound() const {
  const double n = static_cast<double>(dim());
  const double train = static_cast<double>(spec_.train_x.size());
  const double dx = spec_.x_max - spec_.x_min;
  const double floor = spec_.var_floor;
  double theta1_peak = 0.0, theta2_min = std::numeric_limits<double>::infinity();
  double a_peak = 0.0, big_a_peak = 0.0, xi_peak = 0.0;
  for (const TruncGpItem& it : spec_.item) {
    theta1_peak = std::max(theta1_peak, it.theta1);
    theta2_min = std::min(theta2_min, it.theta2);
    xi_peak = std::max(xi_peak, it.xi_max);
    for (double av : it.a) a_peak = std::max(a_peak, std::fabs(av));
    for (double entry : it.A.data()) big_a_peak = std::max(big_a_peak, std::fabs(entry));
  }
  const double mu_peak = xi_peak + train * theta1_peak * a_peak;
  return 4.0 * n * n * train * theta1_peak * dx / (floor * theta2_min) *
         (train * big_a_peak * theta1_peak +
          mu_peak * (a_peak + train * big_a_peak * theta1_peak * mu_peak / floor));
}

double TruncGpModel::cost(const Vec& xi) const {
  check_sample(xi);
  double c = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    const TruncGpItem& it = spec_.item[i];
    c += piecewise_cost(xi[i], it.eta1, it.eta2, it.eta3, it.cost_l, it.cost_u);
  }
  return c;
}

}  // namespace ddprice
