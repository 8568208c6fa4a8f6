// SPDX-License-Identifier: Apache-2.0
//
// nfmimo: noncoherent MIMO detection under near-field spatial correlation
// Copyright (C) 2026 The nfmimo authors
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

#ifndef NFMIMO_DETECTION_HPP
#define NFMIMO_DETECTION_HPP

#include "channel.hpp"
#include "constellation.hpp"
#include "errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace nfmimo
{

// Conditional covariance of y given the symbol amplitudes x:
//   sum_k |x_k|^2 p_k R_k + sigma2 I
// (independent user channels, white noise).
inline Eigen::MatrixXcd hypothesis_covariance(std::span<const double> symbols,
                                              std::span<const CovarianceMatrix> models,
                                              std::span<const double> powers, double sigma2)
{
    if (symbols.size() != models.size() || powers.size() != models.size() || models.empty())
        throw Error(ErrorCode::DimensionMismatch, "one symbol, model and power per user required");
    const Eigen::Index n = models.front().dimension();
    for (const auto &m : models)
        if (m.dimension() != n)
            throw Error(ErrorCode::DimensionMismatch, "all covariance models must share one dimension");
    Eigen::MatrixXcd sigma = sigma2 * Eigen::MatrixXcd::Identity(n, n);
    for (std::size_t k = 0; k < models.size(); ++k)
    {
        const double w = symbols[k] * symbols[k] * powers[k];
        if (w != 0.0)
            sigma.noalias() += w * (models[k].factor() * models[k].factor().adjoint());
    }
    return sigma;
}

// Cholesky factor of a dense Hermitian positive definite Sigma.
class DenseFactorization
{
public:
    explicit DenseFactorization(const Eigen::MatrixXcd &sigma) : llt_(sigma)
    {
        if (llt_.info() != Eigen::Success)
            throw Error(ErrorCode::InvalidArgument, "hypothesis covariance is not positive definite");
        log_det_ = 2.0 * llt_.matrixLLT().diagonal().real().array().log().sum();
    }

    Eigen::Index dimension() const { return llt_.matrixLLT().rows(); }
    double log_det() const noexcept { return log_det_; }

    // y^H Sigma^{-1} y + log|Sigma|
    double score(const Eigen::Ref<const Eigen::VectorXcd> &y) const
    {
        const Eigen::VectorXcd t = llt_.matrixL().solve(y);
        return t.squaredNorm() + log_det_;
    }

private:
    Eigen::LLT<Eigen::MatrixXcd> llt_;
    double log_det_ = 0.0;
};

// Sigma = sigma2 I + W W^H with W of size N x r. Inverse and determinant go
// through the r x r capacitance matrix C = sigma2 I + W^H W:
//   y^H Sigma^{-1} y = (|y|^2 - (W^H y)^H C^{-1} (W^H y)) / sigma2
//   log|Sigma|       = (N - r) log sigma2 + log|C|
class LowRankFactorization
{
public:
    LowRankFactorization(double sigma2, Eigen::MatrixXcd w) : sigma2_(sigma2), w_(std::move(w))
    {
        if (!(sigma2 > 0.0))
            throw Error(ErrorCode::InvalidArgument, "noise floor must be positive");
        const Eigen::Index r = w_.cols();
        Eigen::MatrixXcd cap = w_.adjoint() * w_;
        cap.diagonal().array() += sigma2;
        llt_.compute(cap);
        if (llt_.info() != Eigen::Success)
            throw Error(ErrorCode::InvalidArgument, "capacitance matrix is not positive definite");
        log_det_ = static_cast<double>(w_.rows() - r) * std::log(sigma2) +
                   2.0 * llt_.matrixLLT().diagonal().real().array().log().sum();
    }

    Eigen::Index dimension() const noexcept { return w_.rows(); }
    Eigen::Index rank() const noexcept { return w_.cols(); }
    double log_det() const noexcept { return log_det_; }

    double score(const Eigen::Ref<const Eigen::VectorXcd> &y) const
    {
        const Eigen::VectorXcd t = llt_.matrixL().solve(w_.adjoint() * y);
        return (y.squaredNorm() - t.squaredNorm()) / sigma2_ + log_det_;
    }

private:
    double sigma2_;
    Eigen::MatrixXcd w_;
    Eigen::LLT<Eigen::MatrixXcd> llt_;
    double log_det_ = 0.0;
};

namespace detail
{
inline void require_finite(const Eigen::Ref<const Eigen::VectorXcd> &y)
{
    if (!y.allFinite())
        throw Error(ErrorCode::NonFiniteInput, "received vector has non-finite entries");
}
} // namespace detail

inline double quadratic_score(const Eigen::Ref<const Eigen::VectorXcd> &y, const DenseFactorization &f)
{
    if (y.size() != f.dimension())
        throw Error(ErrorCode::DimensionMismatch, "received vector length differs from covariance");
    detail::require_finite(y);
    return f.score(y);
}

inline double quadratic_score(const Eigen::Ref<const Eigen::VectorXcd> &y, const LowRankFactorization &f)
{
    if (y.size() != f.dimension())
        throw Error(ErrorCode::DimensionMismatch, "received vector length differs from covariance");
    detail::require_finite(y);
    return f.score(y);
}

enum class ScoringPath
{
    Dense,
    LowRank,
};

// Precomputed factorizations of every hypothesis covariance for one
// scenario. Hypotheses are enumerated lexicographically over symbol indices
// (user 0 most significant) so that argmin with a strict comparison breaks
// ties towards the lowest index vector. Immutable after construction.
class HypothesisBank
{
public:
    static HypothesisBank multiuser(const Constellation &constellation, std::span<const CovarianceMatrix> models,
                                    std::span<const double> powers, double sigma2,
                                    ScoringPath path = ScoringPath::LowRank)
    {
        return HypothesisBank(constellation, models, powers, sigma2, path);
    }

    static HypothesisBank single_user(const Constellation &constellation, const CovarianceMatrix &model, double power,
                                      double sigma2, ScoringPath path = ScoringPath::LowRank)
    {
        return HypothesisBank(constellation, std::span<const CovarianceMatrix>(&model, 1),
                              std::span<const double>(&power, 1), sigma2, path);
    }

    std::size_t size() const noexcept { return log_dets_.size(); }
    std::size_t users() const noexcept { return users_; }
    std::size_t order() const noexcept { return order_; }
    Eigen::Index dimension() const noexcept { return dimension_; }
    ScoringPath path() const noexcept { return path_; }
    CorrelationModel model() const noexcept { return model_; }
    double noise_power() const noexcept { return sigma2_; }
    double log_det(std::size_t h) const { return log_dets_.at(h); }

    // Constellation indices (0-based) of hypothesis h, one per user.
    std::span<const int> symbols(std::size_t h) const
    {
        return std::span<const int>(symbols_).subspan(h * users_, users_);
    }

    void scores(const Eigen::Ref<const Eigen::VectorXcd> &y, std::span<double> out) const
    {
        if (y.size() != dimension_)
            throw Error(ErrorCode::DimensionMismatch, "received vector length differs from bank dimension");
        if (out.size() != size())
            throw Error(ErrorCode::DimensionMismatch, "score buffer size differs from bank size");
        detail::require_finite(y);
        if (path_ == ScoringPath::Dense)
        {
            for (std::size_t h = 0; h < size(); ++h)
                out[h] = dense_[h].score(y);
            return;
        }
        const double energy = y.squaredNorm();
        const Eigen::VectorXcd projected = basis_.adjoint() * y;
        Eigen::VectorXcd v(projected.size());
        for (std::size_t h = 0; h < size(); ++h)
        {
            v = scales_[h].cwiseProduct(projected);
            lowrank_[h].matrixL().solveInPlace(v);
            out[h] = (energy - v.squaredNorm()) / sigma2_ + log_dets_[h];
        }
    }

    std::vector<double> scores(const Eigen::Ref<const Eigen::VectorXcd> &y) const
    {
        std::vector<double> out(size());
        scores(y, out);
        return out;
    }

    double score(const Eigen::Ref<const Eigen::VectorXcd> &y, std::size_t h) const
    {
        return scores(y).at(h);
    }

private:
    HypothesisBank(const Constellation &constellation, std::span<const CovarianceMatrix> models,
                   std::span<const double> powers, double sigma2, ScoringPath path)
        : users_(models.size()), order_(constellation.order()), sigma2_(sigma2), path_(path)
    {
        if (models.empty())
            throw Error(ErrorCode::EmptyBank, "hypothesis bank needs at least one user");
        if (powers.size() != models.size())
            throw Error(ErrorCode::DimensionMismatch, "one power per user required");
        dimension_ = models.front().dimension();
        model_ = models.front().model();
        double max_received = 0.0;
        for (std::size_t k = 0; k < models.size(); ++k)
        {
            if (models[k].dimension() != dimension_)
                throw Error(ErrorCode::DimensionMismatch, "all covariance models must share one dimension");
            if (!(powers[k] > 0.0) || !std::isfinite(powers[k]))
                throw Error(ErrorCode::InvalidArgument, "powers must be positive and finite");
            max_received = std::max(max_received, powers[k] * models[k].trace());
        }
        if (!(sigma2 >= 1e-12 * max_received / static_cast<double>(dimension_)) || !(sigma2 > 0.0))
            throw Error(ErrorCode::InvalidArgument, "noise power below the positive-definiteness floor");

        std::size_t count = 1;
        for (std::size_t k = 0; k < users_; ++k)
        {
            if (count > std::numeric_limits<std::size_t>::max() / order_ || count * order_ > (1u << 24))
                throw Error(ErrorCode::InvalidArgument, "hypothesis set too large for exhaustive search");
            count *= order_;
        }
        symbols_.resize(count * users_);
        for (std::size_t h = 0; h < count; ++h)
        {
            std::size_t rem = h;
            for (std::size_t k = users_; k-- > 0;)
            {
                symbols_[h * users_ + k] = static_cast<int>(rem % order_);
                rem /= order_;
            }
        }

        std::vector<double> amplitudes(users_);
        if (path_ == ScoringPath::Dense)
        {
            dense_.reserve(count);
            log_dets_.reserve(count);
            for (std::size_t h = 0; h < count; ++h)
            {
                for (std::size_t k = 0; k < users_; ++k)
                    amplitudes[k] = constellation.level(static_cast<std::size_t>(symbols_[h * users_ + k]));
                dense_.emplace_back(hypothesis_covariance(amplitudes, models, powers, sigma2));
                log_dets_.push_back(dense_.back().log_det());
            }
            return;
        }

        // Shared basis [F_1 ... F_K]; hypothesis h scales user k's block by
        // sqrt(|x_k|^2 p_k).
        Eigen::Index rank = 0;
        std::vector<Eigen::Index> offsets(users_ + 1, 0);
        for (std::size_t k = 0; k < users_; ++k)
        {
            offsets[k] = rank;
            rank += models[k].factor_rank();
        }
        offsets[users_] = rank;
        basis_.resize(dimension_, rank);
        for (std::size_t k = 0; k < users_; ++k)
            basis_.middleCols(offsets[k], models[k].factor_rank()) = models[k].factor();
        const Eigen::MatrixXcd gram = basis_.adjoint() * basis_;

        scales_.reserve(count);
        lowrank_.reserve(count);
        log_dets_.reserve(count);
        const double log_sigma2 = std::log(sigma2);
        for (std::size_t h = 0; h < count; ++h)
        {
            Eigen::VectorXd scale(rank);
            for (std::size_t k = 0; k < users_; ++k)
            {
                const double x = constellation.level(static_cast<std::size_t>(symbols_[h * users_ + k]));
                scale.segment(offsets[k], offsets[k + 1] - offsets[k]).setConstant(std::sqrt(x * x * powers[k]));
            }
            Eigen::MatrixXcd cap = scale.asDiagonal() * gram * scale.asDiagonal();
            cap.diagonal().array() += sigma2;
            Eigen::LLT<Eigen::MatrixXcd> llt(cap);
            if (llt.info() != Eigen::Success)
                throw Error(ErrorCode::InvalidArgument, "capacitance matrix is not positive definite");
            log_dets_.push_back(static_cast<double>(dimension_ - rank) * log_sigma2 +
                                2.0 * llt.matrixLLT().diagonal().real().array().log().sum());
            scales_.push_back(std::move(scale));
            lowrank_.push_back(std::move(llt));
        }
    }

    std::size_t users_;
    std::size_t order_;
    double sigma2_;
    ScoringPath path_;
    Eigen::Index dimension_ = 0;
    CorrelationModel model_ = CorrelationModel::NearField;
    std::vector<int> symbols_;
    std::vector<double> log_dets_;

    std::vector<DenseFactorization> dense_;

    Eigen::MatrixXcd basis_;
    std::vector<Eigen::VectorXd> scales_;
    std::vector<Eigen::LLT<Eigen::MatrixXcd>> lowrank_;
};

struct DetectionResult
{
    std::vector<int> symbols; // 0-based constellation index per user
    std::vector<double> scores; // empty unless requested
};

namespace detail
{
inline std::size_t argmin(std::span<const double> scores)
{
    if (scores.empty())
        throw Error(ErrorCode::EmptyBank, "no hypotheses to choose from");
    std::size_t best = 0;
    for (std::size_t h = 1; h < scores.size(); ++h)
        if (scores[h] < scores[best])
            best = h;
    return best;
}
} // namespace detail

// Joint ML decision over all M^K symbol vectors.
inline DetectionResult detect_ml_multiuser(const Eigen::Ref<const Eigen::VectorXcd> &y, const HypothesisBank &bank,
                                           bool keep_scores = false)
{
    if (bank.size() == 0)
        throw Error(ErrorCode::EmptyBank, "empty hypothesis bank");
    std::vector<double> scores = bank.scores(y);
    const std::size_t best = detail::argmin(scores);
    DetectionResult out;
    const auto sym = bank.symbols(best);
    out.symbols.assign(sym.begin(), sym.end());
    if (keep_scores)
        out.scores = std::move(scores);
    return out;
}

// Single-user decision; the bank decides whether the exact (near-field) or
// mismatched (far-field) model is used. Returns a 0-based level index.
inline int detect_single_user(const Eigen::Ref<const Eigen::VectorXcd> &y, const HypothesisBank &bank)
{
    if (bank.size() == 0)
        throw Error(ErrorCode::EmptyBank, "empty hypothesis bank");
    if (bank.users() != 1)
        throw Error(ErrorCode::DimensionMismatch, "single-user detection needs a single-user bank");
    const std::vector<double> scores = bank.scores(y);
    return static_cast<int>(detail::argmin(scores));
}

} // namespace nfmimo

#endif
