// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The ospa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "ospa/kriging.hpp"
#include "ospa/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace ospa
{
    namespace
    {
        Eigen::MatrixXd correlation(const Eigen::MatrixXd &X, const Eigen::VectorXd &inv_ls)
        {
            const Eigen::Index n = X.rows();
            const Eigen::MatrixXd S = X * inv_ls.asDiagonal();
            Eigen::MatrixXd R(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
            {
                R(i, i) = 1.0;
                for (Eigen::Index j = 0; j < i; ++j)
                {
                    const double d2 = (S.row(i) - S.row(j)).squaredNorm();
                    R(i, j) = R(j, i) = std::exp(-0.5 * d2);
                }
            }
            return R;
        }

        struct Merged
        {
            Eigen::MatrixXd X;
            Eigen::VectorXd y;
        };

        // Average responses of coinciding inputs
        Merged merge_duplicates(const Eigen::MatrixXd &X, const Eigen::VectorXd &y)
        {
            const Eigen::Index n = X.rows();
            const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
            std::vector<Eigen::Index> owner(static_cast<std::size_t>(n), -1);
            std::vector<Eigen::Index> reps;
            for (Eigen::Index i = 0; i < n; ++i)
            {
                for (Eigen::Index r : reps)
                {
                    if ((X.row(i) - X.row(r)).cwiseAbs().maxCoeff() <= 1e-12 * scale)
                    {
                        owner[static_cast<std::size_t>(i)] = r;
                        break;
                    }
                }
                if (owner[static_cast<std::size_t>(i)] < 0)
                {
                    owner[static_cast<std::size_t>(i)] = i;
                    reps.push_back(i);
                }
            }
            Merged m;
            m.X.resize(static_cast<Eigen::Index>(reps.size()), X.cols());
            m.y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(reps.size()));
            Eigen::VectorXd count = Eigen::VectorXd::Zero(m.y.size());
            for (std::size_t k = 0; k < reps.size(); ++k)
                m.X.row(static_cast<Eigen::Index>(k)) = X.row(reps[k]);
            for (Eigen::Index i = 0; i < n; ++i)
            {
                const auto k = static_cast<Eigen::Index>(
                    std::find(reps.begin(), reps.end(), owner[static_cast<std::size_t>(i)]) - reps.begin());
                m.y(k) += y(i);
                count(k) += 1.0;
            }
            m.y.array() /= count.array();
            return m;
        }

        Eigen::VectorXd data_range(const Eigen::MatrixXd &X)
        {
            Eigen::VectorXd r = X.colwise().maxCoeff() - X.colwise().minCoeff();
            for (Eigen::Index k = 0; k < r.size(); ++k)
                if (!(r(k) > 0.0))
                    r(k) = 1.0;
            return r;
        }
    } // namespace

    double kriging_log_likelihood(const Eigen::MatrixXd &X, const Eigen::VectorXd &y,
                                  const Eigen::VectorXd &length_scales, double nugget)
    {
        const Eigen::Index n = X.rows();
        Eigen::MatrixXd R = correlation(X, length_scales.cwiseInverse());
        R.diagonal().array() += nugget;
        Eigen::LLT<Eigen::MatrixXd> llt(R);
        if (llt.info() != Eigen::Success)
            return -std::numeric_limits<double>::infinity();

        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
        const Eigen::VectorXd ri1 = llt.solve(ones);
        const double mu = ri1.dot(y) / ri1.sum();
        const Eigen::VectorXd res = y - mu * ones;
        const double sigma2 = std::max(res.dot(llt.solve(res)) / static_cast<double>(n), 1e-300);
        const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
        const double ll = -0.5 * static_cast<double>(n) * std::log(sigma2) - 0.5 * logdet;
        return std::isfinite(ll) ? ll : -std::numeric_limits<double>::infinity();
    }

    Eigen::VectorXd nelder_mead_minimize(const std::function<double(const Eigen::VectorXd &)> &f, Eigen::VectorXd start,
                                         const Eigen::VectorXd &lower, const Eigen::VectorXd &upper, double initial_step,
                                         int max_evals, double *best_value)
    {
        const Eigen::Index d = start.size();
        auto clamp = [&](Eigen::VectorXd v) { return Eigen::VectorXd(v.cwiseMax(lower).cwiseMin(upper)); };

        std::vector<Eigen::VectorXd> simplex;
        std::vector<double> values;
        int evals = 0;
        auto eval = [&](const Eigen::VectorXd &v) {
            ++evals;
            const double r = f(v);
            return std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
        };

        simplex.push_back(clamp(start));
        values.push_back(eval(simplex[0]));
        for (Eigen::Index k = 0; k < d; ++k)
        {
            Eigen::VectorXd v = simplex[0];
            v(k) += (v(k) + initial_step <= upper(k)) ? initial_step : -initial_step;
            simplex.push_back(clamp(v));
            values.push_back(eval(simplex.back()));
        }

        std::vector<std::size_t> order(simplex.size());
        while (evals < max_evals)
        {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
            const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];

            if (std::abs(values[worst] - values[best]) <= 1e-10 * (1.0 + std::abs(values[best])))
            {
                double spread = 0.0;
                for (const auto &v : simplex)
                    spread = std::max(spread, (v - simplex[best]).cwiseAbs().maxCoeff());
                if (spread < 1e-8)
                    break;
            }

            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
            for (std::size_t i : order)
                if (i != worst)
                    centroid += simplex[i];
            centroid /= static_cast<double>(d);

            const Eigen::VectorXd xr = clamp(centroid + (centroid - simplex[worst]));
            const double fr = eval(xr);
            if (fr < values[best])
            {
                const Eigen::VectorXd xe = clamp(centroid + 2.0 * (centroid - simplex[worst]));
                const double fe = eval(xe);
                if (fe < fr)
                {
                    simplex[worst] = xe;
                    values[worst] = fe;
                }
                else
                {
                    simplex[worst] = xr;
                    values[worst] = fr;
                }
                continue;
            }
            if (fr < values[second])
            {
                simplex[worst] = xr;
                values[worst] = fr;
                continue;
            }
            const bool outside = fr < values[worst];
            const Eigen::VectorXd xc =
                clamp(outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                              : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid)));
            const double fc = eval(xc);
            if (fc < std::min(fr, values[worst]))
            {
                simplex[worst] = xc;
                values[worst] = fc;
                continue;
            }
            // shrink towards the best vertex
            for (std::size_t i = 0; i < simplex.size(); ++i)
            {
                if (i == best)
                    continue;
                simplex[i] = clamp(simplex[best] + 0.5 * (simplex[i] - simplex[best]));
                values[i] = eval(simplex[i]);
            }
        }

        const auto it = std::min_element(values.begin(), values.end());
        if (best_value)
            *best_value = *it;
        return simplex[static_cast<std::size_t>(it - values.begin())];
    }

    KrigingModel KrigingModel::train(const Eigen::MatrixXd &X, const Eigen::VectorXd &y, const KrigingOptions &options,
                                     const Eigen::VectorXd *warm_start)
    {
        if (X.rows() != y.size())
            throw std::invalid_argument("Kriging: X and y disagree on the sample count");
        if (!y.allFinite() || !X.allFinite())
            throw std::invalid_argument("Kriging: training data must be finite");
        const Merged data = merge_duplicates(X, y);
        if (data.X.rows() < 2)
            throw KrigingError("Kriging needs at least 2 distinct training inputs");

        const Eigen::Index d = data.X.cols();
        const Eigen::VectorXd range = data_range(data.X);
        const Eigen::VectorXd lo = (range * options.min_length_factor).array().log();
        const Eigen::VectorXd hi = (range * options.max_length_factor).array().log();

        auto objective = [&](const Eigen::VectorXd &log_ls) {
            const double ll = kriging_log_likelihood(data.X, data.y, log_ls.array().exp(), options.nugget);
            return std::isfinite(ll) ? -ll : 1e300;
        };

        Eigen::VectorXd best_log;
        double best_val = std::numeric_limits<double>::infinity();
        auto consider = [&](const Eigen::VectorXd &start, double step, int evals) {
            double val = 0.0;
            Eigen::VectorXd x = nelder_mead_minimize(objective, start, lo, hi, step, evals, &val);
            if (val < best_val)
            {
                best_val = val;
                best_log = x;
            }
        };

        if (warm_start && warm_start->size() == d)
        {
            consider(warm_start->array().log().matrix(), 0.25, options.warm_start_evals);
        }
        else
        {
            Rng rng(options.seed);
            // first start: a quarter of the data range in every dimension
            consider((range * 0.25).array().log().matrix(), 0.5, options.evals_per_start);
            for (int s = 1; s < options.multistarts; ++s)
            {
                Eigen::VectorXd start(d);
                for (Eigen::Index k = 0; k < d; ++k)
                    start(k) = uniform(rng, lo(k), hi(k));
                consider(start, 0.5, options.evals_per_start);
            }
        }
        if (best_log.size() != d)
            best_log = (range * 0.25).array().log();

        return with_length_scales(data.X, data.y, best_log.array().exp(), options);
    }

    KrigingModel KrigingModel::with_length_scales(const Eigen::MatrixXd &X, const Eigen::VectorXd &y,
                                                  const Eigen::VectorXd &length_scales, const KrigingOptions &options)
    {
        if (length_scales.size() != X.cols() || !(length_scales.array() > 0.0).all())
            throw std::invalid_argument("Kriging: length-scales must be positive, one per input dimension");
        const Merged data = merge_duplicates(X, y);
        if (data.X.rows() < 2)
            throw KrigingError("Kriging needs at least 2 distinct training inputs");

        KrigingModel m;
        m.X_ = data.X;
        m.y_ = data.y;
        m.length_scales_ = length_scales;
        m.factorize(options);
        return m;
    }

    void KrigingModel::factorize(const KrigingOptions &options)
    {
        const Eigen::Index n = X_.rows();
        const Eigen::MatrixXd R0 = correlation(X_, length_scales_.cwiseInverse());
        for (nugget_ = options.nugget; nugget_ <= options.max_nugget * (1.0 + 1e-9); nugget_ *= 10.0)
        {
            Eigen::MatrixXd R = R0;
            R.diagonal().array() += nugget_;
            chol_.compute(R);
            if (chol_.info() == Eigen::Success)
                break;
        }
        if (chol_.info() != Eigen::Success || nugget_ > options.max_nugget * (1.0 + 1e-9))
            throw KrigingError("Kriging correlation matrix is ill-conditioned even with nugget " +
                               std::to_string(options.max_nugget));

        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
        r_inv_one_ = chol_.solve(ones);
        one_r_inv_one_ = r_inv_one_.sum();
        trend_ = r_inv_one_.dot(y_) / one_r_inv_one_;
        const Eigen::VectorXd res = y_ - trend_ * ones;
        alpha_ = chol_.solve(res);
        sigma2_ = std::max(res.dot(alpha_) / static_cast<double>(n), 0.0);
        log_likelihood_ = kriging_log_likelihood(X_, y_, length_scales_, nugget_);
    }

    double KrigingModel::process_std() const { return std::sqrt(sigma2_); }

    KrigingPrediction KrigingModel::predict(const Eigen::VectorXd &x) const
    {
        if (x.size() != X_.cols())
            throw std::invalid_argument("Kriging: query has the wrong dimension");
        const Eigen::VectorXd inv = length_scales_.cwiseInverse();
        Eigen::VectorXd r(X_.rows());
        for (Eigen::Index i = 0; i < X_.rows(); ++i)
        {
            const double d2 = ((X_.row(i).transpose() - x).cwiseProduct(inv)).squaredNorm();
            r(i) = d2 == 0.0 ? 1.0 + nugget_ : std::exp(-0.5 * d2);
        }

        KrigingPrediction p;
        p.mean = trend_ + r.dot(alpha_);
        const Eigen::VectorXd ri_r = chol_.solve(r);
        const double u = 1.0 - r_inv_one_.dot(r);
        const double var = sigma2_ * (1.0 + nugget_ - r.dot(ri_r) + u * u / one_r_inv_one_);
        p.std_dev = std::sqrt(std::max(var, 0.0));
        return p;
    }

} // namespace ospa
