#include "fsem/unsupervised.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>

#include "fsem/rng.hpp"

namespace fsem {

namespace {

Matrix squared_distances(const Matrix& x) {
    const Vector norms = x.rowwise().squaredNorm();
    Matrix d = -2.0 * (x * x.transpose());
    d.colwise() += norms;
    d.rowwise() += norms.transpose();
    d = d.cwiseMax(0.0);
    d.diagonal().setZero();
    return d;
}

std::size_t nearest_row(const Matrix& centroids, const Eigen::Ref<const Eigen::RowVectorXd>& point, double* dist) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
        const double d = (centroids.row(c) - point).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = static_cast<std::size_t>(c);
        }
    }
    if (dist) *dist = best_d;
    return best;
}

std::vector<std::size_t> assign_nearest(const Matrix& x, const Matrix& centroids) {
    std::vector<std::size_t> a(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) a[static_cast<std::size_t>(i)] = nearest_row(centroids, x.row(i), nullptr);
    return a;
}

// Cluster means; an empty cluster takes over the point lying farthest from
// its current centroid (assignments are updated accordingly).
Matrix update_means(const Matrix& x, std::vector<std::size_t>& a, std::size_t k, const Matrix& previous) {
    const Eigen::Index d = x.cols();
    for (;;) {
        Matrix sums = Matrix::Zero(static_cast<Eigen::Index>(k), d);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            sums.row(static_cast<Eigen::Index>(a[i])) += x.row(static_cast<Eigen::Index>(i));
            ++counts[a[i]];
        }
        const auto empty = std::find(counts.begin(), counts.end(), std::size_t{0});
        if (empty == counts.end()) {
            for (std::size_t c = 0; c < k; ++c) sums.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);
            return sums;
        }
        const auto target = static_cast<std::size_t>(empty - counts.begin());
        std::size_t far = a.size();
        double far_d = -1.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (counts[a[i]] < 2) continue;  // never empty another cluster
            const double dd = (x.row(static_cast<Eigen::Index>(i)) - previous.row(static_cast<Eigen::Index>(a[i]))).squaredNorm();
            if (dd > far_d) {
                far_d = dd;
                far = i;
            }
        }
        a[far] = target;
    }
}

struct KMeansRun {
    std::vector<std::size_t> assignments;
    Matrix centroids;
    std::vector<double> trace;
    std::size_t iterations = 0;
    bool converged = false;
};

Matrix initial_centroids(const Matrix& x, std::size_t k, KMeansInit init, Rng& rng) {
    const std::size_t n = static_cast<std::size_t>(x.rows());
    Matrix c(static_cast<Eigen::Index>(k), x.cols());
    if (init == KMeansInit::random_points) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t j = 0; j < k; ++j) {
            std::swap(idx[j], idx[j + rng.below(n - j)]);
            c.row(static_cast<Eigen::Index>(j)) = x.row(static_cast<Eigen::Index>(idx[j]));
        }
        return c;
    }
    c.row(0) = x.row(static_cast<Eigen::Index>(rng.below(n)));
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    for (std::size_t j = 1; j < k; ++j) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], (x.row(static_cast<Eigen::Index>(i)) - c.row(static_cast<Eigen::Index>(j - 1))).squaredNorm());
            total += d2[i];
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            const double r = rng.uniform() * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (r < acc) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.below(n);
        }
        c.row(static_cast<Eigen::Index>(j)) = x.row(static_cast<Eigen::Index>(pick));
    }
    return c;
}

KMeansRun lloyd(const Matrix& x, std::size_t k, Matrix centroids, std::size_t max_iterations) {
    KMeansRun run;
    run.assignments = assign_nearest(x, centroids);
    for (std::size_t it = 0; it < max_iterations; ++it) {
        centroids = update_means(x, run.assignments, k, centroids);
        run.trace.push_back(wcss(x, run.assignments, centroids));
        ++run.iterations;
        std::vector<std::size_t> next = assign_nearest(x, centroids);
        if (next == run.assignments) {
            run.converged = true;
            break;
        }
        run.assignments = std::move(next);
    }
    if (run.iterations == 0) centroids = update_means(x, run.assignments, k, centroids);
    run.centroids = std::move(centroids);
    return run;
}

double log_sum_exp(const double* v, std::size_t n) {
    const double m = *std::max_element(v, v + n);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::exp(v[i] - m);
    return m + std::log(s);
}

// Per-row log of weight_k * N(x | mean_k, diag(var_k)).
Matrix component_log_densities(const Matrix& x, const Vector& weights, const Matrix& means, const Matrix& variances) {
    const Eigen::Index n = x.rows(), k = means.rows();
    Matrix out(n, k);
    const double log_2pi = std::log(2.0 * std::numbers::pi);
    for (Eigen::Index c = 0; c < k; ++c) {
        const double base = std::log(weights(c)) - 0.5 * (variances.row(c).array().log().sum() +
                                                          static_cast<double>(x.cols()) * log_2pi);
        const Eigen::RowVectorXd inv = variances.row(c).cwiseInverse();
        for (Eigen::Index i = 0; i < n; ++i) {
            out(i, c) = base - 0.5 * (x.row(i) - means.row(c)).array().square().matrix().dot(inv);
        }
    }
    return out;
}

void require_matrix(const Matrix& x, const char* op) {
    if (x.rows() == 0 || x.cols() == 0) throw std::invalid_argument(std::string(op) + ": empty input matrix");
    if (!x.allFinite()) throw std::invalid_argument(std::string(op) + ": input contains non-finite values");
}

}  // namespace

// ---------------------------------------------------------------- PCA

std::size_t pca_dims(std::size_t requested, std::size_t rows, std::size_t cols) {
    if (rows < 2) throw std::invalid_argument("pca: need at least 2 rows");
    return std::min({requested, rows - 1, cols});
}

PcaModel pca_fit(const Matrix& x, std::size_t k) {
    require_matrix(x, "pca_fit");
    const auto n = static_cast<std::size_t>(x.rows()), d = static_cast<std::size_t>(x.cols());
    if (n < 2) throw std::invalid_argument("pca_fit: need at least 2 rows");
    if (k < 1 || k > std::min(n - 1, d)) {
        throw std::invalid_argument("pca_fit: k = " + std::to_string(k) + " outside [1, min(N-1, D)] = [1, " +
                                    std::to_string(std::min(n - 1, d)) + "]");
    }
    PcaModel model;
    model.mean = x.colwise().mean().transpose();
    const Matrix centred = x.rowwise() - model.mean.transpose();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
    const Eigen::MatrixXd& v = svd.matrixV();
    const Vector& s = svd.singularValues();
    const auto kk = static_cast<Eigen::Index>(k);
    model.components = v.leftCols(kk);
    model.explained_variance = s.head(kk).array().square() / static_cast<double>(n - 1);
    for (Eigen::Index j = 0; j < kk; ++j) {
        Eigen::Index arg = 0;
        model.components.col(j).cwiseAbs().maxCoeff(&arg);
        if (model.components(arg, j) < 0.0) model.components.col(j) *= -1.0;
    }
    return model;
}

Matrix pca_transform(const PcaModel& model, const Matrix& x) {
    if (x.cols() != model.mean.size()) {
        throw std::invalid_argument("pca_transform: input has " + std::to_string(x.cols()) + " columns, model expects " +
                                    std::to_string(model.mean.size()));
    }
    return (x.rowwise() - model.mean.transpose()) * model.components;
}

// ---------------------------------------------------------------- t-SNE

double tsne_perplexity_cap(double requested, std::size_t points) {
    if (points < 5) throw std::invalid_argument("tsne: need at least 5 points");
    const double bound = (static_cast<double>(points) - 1.0) / 3.0;
    return std::min(requested, std::nextafter(bound, 0.0));
}

TsneResult tsne(const Matrix& x, const TsneParams& p) {
    require_matrix(x, "tsne");
    const auto n = static_cast<std::size_t>(x.rows());
    if (n < 5) throw std::invalid_argument("tsne: need at least 5 points");
    const double bound = (static_cast<double>(n) - 1.0) / 3.0;
    if (!(p.perplexity > 0.0) || p.perplexity >= bound) {
        throw std::invalid_argument("tsne: perplexity " + std::to_string(p.perplexity) + " infeasible for " +
                                    std::to_string(n) + " points (must be below (N-1)/3 = " + std::to_string(bound) +
                                    ")");
    }
    if (p.out_dims < 1) throw std::invalid_argument("tsne: out_dims must be >= 1");

    const Matrix dist = squared_distances(x);
    const auto N = static_cast<Eigen::Index>(n);
    Matrix cond = Matrix::Zero(N, N);
    TsneResult result;
    result.realized_perplexity.resize(n);
    const double target = p.perplexity;
    for (Eigen::Index i = 0; i < N; ++i) {
        double dmin = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < N; ++j) {
            if (j != i) dmin = std::min(dmin, dist(i, j));
        }
        double beta = 1.0, lo = 0.0, hi = std::numeric_limits<double>::infinity();
        double realized = 0.0;
        for (int iter = 0; iter < 1000; ++iter) {
            double sum = 0.0, weighted = 0.0;
            for (Eigen::Index j = 0; j < N; ++j) {
                if (j == i) continue;
                const double shifted = dist(i, j) - dmin;
                const double v = std::exp(-beta * shifted);
                cond(i, j) = v;
                sum += v;
                weighted += v * shifted;
            }
            const double entropy = std::log(sum) + beta * weighted / sum;
            realized = std::exp(entropy);
            if (std::abs(realized - target) <= p.perplexity_tolerance) break;
            if (realized > target) {
                lo = beta;
                beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
            } else {
                hi = beta;
                beta = 0.5 * (beta + lo);
            }
        }
        cond.row(i) /= cond.row(i).sum();
        result.realized_perplexity[static_cast<std::size_t>(i)] = realized;
    }

    Matrix P = (cond + cond.transpose()) / (2.0 * static_cast<double>(n));
    P = P.cwiseMax(1e-12);
    P.diagonal().setZero();

    Rng rng(p.seed);
    const auto dims = static_cast<Eigen::Index>(p.out_dims);
    Matrix y(N, dims);
    for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = rng.normal(0.0, 1e-4);
    Matrix update = Matrix::Zero(N, dims);
    Matrix gains = Matrix::Ones(N, dims);
    Matrix num(N, N), grad(N, dims);

    for (std::size_t it = 0; it < p.iterations; ++it) {
        const double exaggeration = it < p.exaggeration_iterations ? p.early_exaggeration : 1.0;
        const double momentum = it < p.momentum_switch ? p.initial_momentum : p.final_momentum;

        num = (1.0 + squared_distances(y).array()).inverse().matrix();
        num.diagonal().setZero();
        const double num_sum = num.sum();
        // gradient: 4 * sum_j (e P_ij - Q_ij) num_ij (y_i - y_j)
        const Matrix w = ((exaggeration * P).array() - num.array() / num_sum).matrix().cwiseProduct(num);
        grad = 4.0 * (w.rowwise().sum().asDiagonal() * y - w * y);

        for (Eigen::Index i = 0; i < grad.size(); ++i) {
            double& g = gains.data()[i];
            const bool same_sign = (grad.data()[i] > 0.0) == (update.data()[i] > 0.0);
            g = same_sign ? g * 0.8 : g + 0.2;
            g = std::max(g, 0.01);
            update.data()[i] = momentum * update.data()[i] - p.learning_rate * g * grad.data()[i];
        }
        y += update;
        y.rowwise() -= y.colwise().mean();

        num = (1.0 + squared_distances(y).array()).inverse().matrix();
        num.diagonal().setZero();
        const double total = num.sum();
        double kl = 0.0;
        for (Eigen::Index i = 0; i < N; ++i) {
            for (Eigen::Index j = 0; j < N; ++j) {
                if (i == j) continue;
                const double q = std::max(num(i, j) / total, 1e-300);
                kl += P(i, j) * std::log(P(i, j) / q);
            }
        }
        result.kl_trace.push_back(kl);
    }
    result.layout = std::move(y);
    return result;
}

// ---------------------------------------------------------------- K-Means

double wcss(const Matrix& x, const std::vector<std::size_t>& assignments, const Matrix& centroids) {
    double total = 0.0;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        total += (x.row(static_cast<Eigen::Index>(i)) - centroids.row(static_cast<Eigen::Index>(assignments[i]))).squaredNorm();
    }
    return total;
}

ClusteringResult kmeans_from(const Matrix& x, const Matrix& initial_centroids, std::size_t max_iterations) {
    require_matrix(x, "kmeans_from");
    if (initial_centroids.cols() != x.cols() || initial_centroids.rows() < 1 || initial_centroids.rows() > x.rows()) {
        throw std::invalid_argument("kmeans_from: centroid matrix shape does not fit the data");
    }
    KMeansRun run = lloyd(x, static_cast<std::size_t>(initial_centroids.rows()), initial_centroids, max_iterations);
    ClusteringResult out;
    out.assignments = std::move(run.assignments);
    out.centroids = std::move(run.centroids);
    out.objective_trace = std::move(run.trace);
    out.iterations = run.iterations;
    out.converged = run.converged;
    return out;
}

ClusteringResult kmeans(const Matrix& x, const KMeansParams& params) {
    require_matrix(x, "kmeans");
    const auto n = static_cast<std::size_t>(x.rows());
    if (params.k < 1 || params.k > n) {
        throw std::invalid_argument("kmeans: K = " + std::to_string(params.k) + " must lie in [1, N = " +
                                    std::to_string(n) + "]");
    }
    if (params.restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");
    KMeansRun best;
    double best_wcss = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < params.restarts; ++r) {
        Rng rng(mix_seed(params.seed, r));
        KMeansRun run = lloyd(x, params.k, initial_centroids(x, params.k, params.init, rng), params.max_iterations);
        const double final_wcss = wcss(x, run.assignments, run.centroids);
        if (final_wcss < best_wcss) {
            best_wcss = final_wcss;
            best = std::move(run);
        }
    }
    ClusteringResult out;
    out.assignments = std::move(best.assignments);
    out.centroids = std::move(best.centroids);
    out.objective_trace = std::move(best.trace);
    out.iterations = best.iterations;
    out.converged = best.converged;
    return out;
}

// ---------------------------------------------------------------- GMM

double gmm_log_likelihood(const Matrix& x, const Vector& weights, const Matrix& means, const Matrix& variances) {
    const Matrix logp = component_log_densities(x, weights, means, variances);
    double total = 0.0;
    for (Eigen::Index i = 0; i < logp.rows(); ++i) total += log_sum_exp(logp.row(i).data(), static_cast<std::size_t>(logp.cols()));
    return total;
}

ClusteringResult gmm_fit(const Matrix& x, const GmmParams& params) {
    require_matrix(x, "gmm_fit");
    const auto n = static_cast<std::size_t>(x.rows());
    if (n < 2) throw std::invalid_argument("gmm_fit: need at least 2 points");
    if (params.k < 1 || params.k > n) {
        throw std::invalid_argument("gmm_fit: K = " + std::to_string(params.k) + " must lie in [1, N = " +
                                    std::to_string(n) + "]");
    }
    if (!(params.variance_floor > 0.0)) throw std::invalid_argument("gmm_fit: variance floor must be positive");
    const auto K = static_cast<Eigen::Index>(params.k), N = x.rows(), D = x.cols();

    KMeansParams kp;
    kp.k = params.k;
    kp.seed = params.seed;
    kp.init = KMeansInit::plus_plus;
    const ClusteringResult start = kmeans(x, kp);

    Vector weights = Vector::Zero(K);
    Matrix means = start.centroids;
    Matrix variances = Matrix::Zero(K, D);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<Eigen::Index>(start.assignments[i]);
        weights(c) += 1.0;
        variances.row(c) += (x.row(static_cast<Eigen::Index>(i)) - means.row(c)).array().square().matrix();
    }
    for (Eigen::Index c = 0; c < K; ++c) variances.row(c) /= weights(c);
    weights /= static_cast<double>(n);
    variances = variances.cwiseMax(params.variance_floor);

    ClusteringResult out;
    Matrix resp(N, K);
    auto e_step = [&]() {
        const Matrix logp = component_log_densities(x, weights, means, variances);
        double ll = 0.0;
        for (Eigen::Index i = 0; i < N; ++i) {
            const double lse = log_sum_exp(logp.row(i).data(), static_cast<std::size_t>(K));
            ll += lse;
            resp.row(i) = (logp.row(i).array() - lse).exp().matrix();
        }
        return ll;
    };

    out.objective_trace.push_back(e_step());
    for (std::size_t it = 0; it < params.max_iterations; ++it) {
        const Vector nk = resp.colwise().sum().transpose();
        for (Eigen::Index c = 0; c < K; ++c) {
            if (!(nk(c) > 0.0)) continue;  // keep a starved component where it was
            means.row(c) = (resp.col(c).transpose() * x) / nk(c);
            Eigen::RowVectorXd var = Eigen::RowVectorXd::Zero(D);
            for (Eigen::Index i = 0; i < N; ++i) var += resp(i, c) * (x.row(i) - means.row(c)).array().square().matrix();
            variances.row(c) = (var / nk(c)).cwiseMax(params.variance_floor);
        }
        weights = nk / nk.sum();
        ++out.iterations;
        const double ll = e_step();
        const double previous = out.objective_trace.back();
        out.objective_trace.push_back(ll);
        if (ll - previous < params.tolerance * std::max(1.0, std::abs(ll))) {
            out.converged = true;
            break;
        }
    }
    out.weights = std::move(weights);
    out.centroids = std::move(means);
    out.variances = std::move(variances);
    out.responsibilities = std::move(resp);
    out.assignments = gmm_assign(out.responsibilities);
    return out;
}

std::vector<std::size_t> gmm_assign(const Matrix& responsibilities) {
    std::vector<std::size_t> out(static_cast<std::size_t>(responsibilities.rows()));
    for (Eigen::Index i = 0; i < responsibilities.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index c = 1; c < responsibilities.cols(); ++c) {
            if (responsibilities(i, c) > responsibilities(i, best)) best = c;
        }
        out[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
    }
    return out;
}

std::vector<std::size_t> gmm_assign(const ClusteringResult& result) { return gmm_assign(result.responsibilities); }

// ---------------------------------------------------------------- export

void write_points_csv(const std::filesystem::path& path, const Matrix& points,
                      const std::vector<std::size_t>& assignments) {
    if (static_cast<std::size_t>(points.rows()) != assignments.size()) {
        throw std::invalid_argument("write_points_csv: row count differs from assignment count");
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << "index";
    for (Eigen::Index j = 0; j < points.cols(); ++j) os << ",x" << j;
    os << ",assignment\n";
    char buf[40];
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        os << i;
        for (Eigen::Index j = 0; j < points.cols(); ++j) {
            std::snprintf(buf, sizeof buf, ",%.10g", points(i, j));
            os << buf;
        }
        os << ',' << assignments[static_cast<std::size_t>(i)] << '\n';
    }
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace fsem
