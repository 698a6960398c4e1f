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

#include "ospa/pls.hpp"

#include <cmath>
#include <stdexcept>

namespace ospa
{
    PlsProjection PlsProjection::fit(const Eigen::MatrixXd &X, const Eigen::VectorXd &y, int components)
    {
        const Eigen::Index rows = X.rows();
        const Eigen::Index cols = X.cols();
        if (rows != y.size())
            throw std::invalid_argument("PLS: X and y disagree on the sample count");
        if (components < 1 || rows <= components)
            throw std::invalid_argument("PLS: need B > K' >= 1");

        PlsProjection m;
        m.x_mean_ = X.colwise().mean().transpose();
        m.x_scale_ = Eigen::VectorXd::Ones(cols);
        for (Eigen::Index k = 0; k < cols; ++k)
        {
            const double var = (X.col(k).array() - m.x_mean_(k)).square().sum() / static_cast<double>(rows - 1);
            const double sd = std::sqrt(var);
            if (!(sd > 1e-14 * std::max(1.0, std::abs(m.x_mean_(k)))))
            {
                m.warnings_.push_back("PLS: input column " + std::to_string(k) + " has zero variance and was dropped");
                continue;
            }
            m.x_scale_(k) = sd;
            m.kept_.push_back(static_cast<int>(k));
        }
        if (m.kept_.empty())
            throw std::invalid_argument("PLS: every input column has zero variance");

        const auto kept = static_cast<Eigen::Index>(m.kept_.size());
        Eigen::MatrixXd E(rows, kept);
        for (Eigen::Index j = 0; j < kept; ++j)
        {
            const int k = m.kept_[static_cast<std::size_t>(j)];
            E.col(j) = (X.col(k).array() - m.x_mean_(k)) / m.x_scale_(k);
        }
        m.y_mean_ = y.mean();
        Eigen::VectorXd f = y.array() - m.y_mean_;

        const Eigen::Index want = std::min<Eigen::Index>(components, kept);
        m.weights_.resize(kept, want);
        m.loadings_.resize(kept, want);
        m.y_coef_.resize(want);
        const double e_norm0 = E.norm();

        Eigen::Index a = 0;
        for (; a < want; ++a)
        {
            Eigen::VectorXd w = E.transpose() * f;
            double wn = w.norm();
            if (!(wn > 1e-12 * std::max(1.0, e_norm0 * f.norm())))
            {
                // Response carries no more information: follow the largest remaining input direction
                Eigen::Index best = 0;
                E.colwise().norm().maxCoeff(&best);
                w = Eigen::VectorXd::Unit(kept, best);
                wn = 1.0;
            }
            w /= wn;
            const Eigen::VectorXd t = E * w;
            const double tt = t.squaredNorm();
            if (!(tt > 1e-24 * std::max(1.0, e_norm0 * e_norm0)))
                break;
            const Eigen::VectorXd p = E.transpose() * t / tt;
            const double c = f.dot(t) / tt;
            E -= t * p.transpose();
            f -= c * t;
            m.weights_.col(a) = w;
            m.loadings_.col(a) = p;
            m.y_coef_(a) = c;
        }
        if (a < want)
        {
            m.warnings_.push_back("PLS: inputs exhausted after " + std::to_string(a) + " components");
            m.weights_.conservativeResize(Eigen::NoChange, a);
            m.loadings_.conservativeResize(Eigen::NoChange, a);
            m.y_coef_.conservativeResize(a);
        }
        if (a == 0)
            throw std::invalid_argument("PLS: could not extract any latent component");

        const Eigen::MatrixXd pw = m.loadings_.transpose() * m.weights_;
        m.rotation_ = m.weights_ * pw.inverse();
        return m;
    }

    Eigen::VectorXd PlsProjection::standardize(const Eigen::VectorXd &x) const
    {
        if (x.size() != x_mean_.size())
            throw std::invalid_argument("PLS: input has the wrong dimension");
        Eigen::VectorXd s(static_cast<Eigen::Index>(kept_.size()));
        for (std::size_t j = 0; j < kept_.size(); ++j)
        {
            const int k = kept_[j];
            s(static_cast<Eigen::Index>(j)) = (x(k) - x_mean_(k)) / x_scale_(k);
        }
        return s;
    }

    Eigen::VectorXd PlsProjection::transform(const Eigen::VectorXd &x) const
    {
        return rotation_.transpose() * standardize(x);
    }

    Eigen::MatrixXd PlsProjection::transform_rows(const Eigen::MatrixXd &X) const
    {
        Eigen::MatrixXd T(X.rows(), rotation_.cols());
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            T.row(i) = transform(X.row(i).transpose()).transpose();
        return T;
    }

    double PlsProjection::predict(const Eigen::VectorXd &x) const { return y_mean_ + transform(x).dot(y_coef_); }

    Eigen::MatrixXd PlsProjection::weights() const
    {
        Eigen::MatrixXd full = Eigen::MatrixXd::Zero(x_mean_.size(), weights_.cols());
        for (std::size_t j = 0; j < kept_.size(); ++j)
            full.row(kept_[j]) = weights_.row(static_cast<Eigen::Index>(j));
        return full;
    }

    Eigen::MatrixXd PlsProjection::rotations() const
    {
        Eigen::MatrixXd full = Eigen::MatrixXd::Zero(x_mean_.size(), rotation_.cols());
        for (std::size_t j = 0; j < kept_.size(); ++j)
            full.row(kept_[j]) = rotation_.row(static_cast<Eigen::Index>(j));
        return full;
    }

} // namespace ospa
