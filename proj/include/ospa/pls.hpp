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

#ifndef OSPA_PLS_HPP
#define OSPA_PLS_HPP

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace ospa
{
    // Single-response partial least squares (NIPALS with deflation). Maps a K-dim
    // input onto K' latent scores: t = ((x - mean) / std) * R, R = W (P^T W)^-1.
    class PlsProjection
    {
    public:
        PlsProjection() = default;

        // X is B x K (one row per sample), y has B entries, B > components >= 1.
        // Zero-variance columns are dropped and reported through warnings().
        static PlsProjection fit(const Eigen::MatrixXd &X, const Eigen::VectorXd &y, int components);

        Eigen::VectorXd transform(const Eigen::VectorXd &x) const;
        Eigen::MatrixXd transform_rows(const Eigen::MatrixXd &X) const;

        // Linear PLS prediction y_mean + t * c
        double predict(const Eigen::VectorXd &x) const;

        int components() const { return static_cast<int>(weights_.cols()); }
        int input_dims() const { return static_cast<int>(x_mean_.size()); }

        // Columns are in the space of the kept (standardized) inputs, expanded back to
        // K rows with zeros at dropped columns.
        Eigen::MatrixXd weights() const;
        Eigen::MatrixXd rotations() const;

        const std::vector<std::string> &warnings() const { return warnings_; }

    private:
        Eigen::VectorXd x_mean_, x_scale_;
        std::vector<int> kept_;
        Eigen::MatrixXd weights_;   // kept x K'
        Eigen::MatrixXd loadings_;  // kept x K'
        Eigen::MatrixXd rotation_;  // kept x K'
        Eigen::VectorXd y_coef_;    // K'
        double y_mean_ = 0.0;
        std::vector<std::string> warnings_;

        Eigen::VectorXd standardize(const Eigen::VectorXd &x) const;
    };

} // namespace ospa

#endif
