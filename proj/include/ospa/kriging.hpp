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

#ifndef OSPA_KRIGING_HPP
#define OSPA_KRIGING_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>

namespace ospa
{
    class KrigingError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct KrigingOptions
    {
        double nugget = 1e-10;      // added to the correlation diagonal
        double max_nugget = 1e-6;   // escalated x10 up to this on a failed factorization
        int multistarts = 5;
        int evals_per_start = 200;
        int warm_start_evals = 40;
        // Length-scale search box, as multiples of the per-dimension data range
        double min_length_factor = 1e-2;
        double max_length_factor = 10.0;
        std::uint64_t seed = 0x6b726967ULL;
    };

    struct KrigingPrediction
    {
        double mean = 0.0;
        double std_dev = 0.0;
    };

    // Ordinary Kriging with a Gaussian correlation
    //   R(x, x') = exp(-1/2 sum_k ((x_k - x'_k) / l_k)^2) + nugget [x = x']
    // and an unknown constant trend. Length-scales maximize the concentrated
    // log-likelihood  -n/2 ln(sigma^2) - 1/2 ln|R|.
    class KrigingModel
    {
    public:
        // Rows of X that coincide are merged (their responses averaged). Needs >= 2
        // distinct inputs. With warm_start set, only a short local search around it runs.
        static KrigingModel train(const Eigen::MatrixXd &X, const Eigen::VectorXd &y, const KrigingOptions &options = {},
                                  const Eigen::VectorXd *warm_start = nullptr);

        // No hyperparameter search
        static KrigingModel with_length_scales(const Eigen::MatrixXd &X, const Eigen::VectorXd &y,
                                               const Eigen::VectorXd &length_scales,
                                               const KrigingOptions &options = {});

        KrigingPrediction predict(const Eigen::VectorXd &x) const;

        const Eigen::VectorXd &length_scales() const { return length_scales_; }
        double trend() const { return trend_; }
        double process_variance() const { return sigma2_; }
        double process_std() const;
        double nugget() const { return nugget_; }
        double log_likelihood() const { return log_likelihood_; }
        Eigen::Index size() const { return X_.rows(); }
        Eigen::Index dims() const { return X_.cols(); }

    private:
        Eigen::MatrixXd X_;
        Eigen::VectorXd y_;
        Eigen::VectorXd length_scales_;
        Eigen::LLT<Eigen::MatrixXd> chol_;
        Eigen::VectorXd alpha_;      // R^-1 (y - 1 mu)
        Eigen::VectorXd r_inv_one_;  // R^-1 1
        double one_r_inv_one_ = 0.0;
        double trend_ = 0.0;
        double sigma2_ = 0.0;
        double nugget_ = 0.0;
        double log_likelihood_ = 0.0;

        void factorize(const KrigingOptions &options);
    };

    // Concentrated log-likelihood for given length-scales (-inf if R is not SPD)
    double kriging_log_likelihood(const Eigen::MatrixXd &X, const Eigen::VectorXd &y,
                                  const Eigen::VectorXd &length_scales, double nugget);

    // Bounded Nelder-Mead minimizer; vertices are clamped into [lower, upper]
    Eigen::VectorXd nelder_mead_minimize(const std::function<double(const Eigen::VectorXd &)> &f, Eigen::VectorXd start,
                                         const Eigen::VectorXd &lower, const Eigen::VectorXd &upper, double initial_step,
                                         int max_evals, double *best_value = nullptr);

} // namespace ospa

#endif
