#include "shellrg/banded.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shellrg {

BandedMatrix::BandedMatrix(int n, int ml, int mu)
    : n_(n), ml_(ml), mu_(mu), ldab_(2 * ml + mu + 1),
      a_(static_cast<size_t>(ldab_) * static_cast<size_t>(n), 0.0) {}

double& BandedMatrix::at(int i, int j) {
    if (!stored(i, j)) throw std::out_of_range("BandedMatrix::at outside band");
    return a_[static_cast<size_t>(offset(i, j))];
}

double BandedMatrix::get(int i, int j) const {
    if (!stored(i, j)) return 0.0;
    return a_[static_cast<size_t>(offset(i, j))];
}

void BandedMatrix::clear() { std::fill(a_.begin(), a_.end(), 0.0); }

std::vector<std::vector<double>> BandedMatrix::dense() const {
    std::vector<std::vector<double>> d(static_cast<size_t>(n_),
                                       std::vector<double>(static_cast<size_t>(n_), 0.0));
    for (int j = 0; j < n_; ++j)
        for (int i = std::max(0, j - mu_ - ml_); i <= std::min(n_ - 1, j + ml_); ++i)
            d[static_cast<size_t>(i)][static_cast<size_t>(j)] = get(i, j);
    return d;
}

bool BandedLu::factor(BandedMatrix m) {
    m_ = std::move(m);
    const int n = m_.n_, ml = m_.ml_, mu = m_.mu_;
    piv_.assign(static_cast<size_t>(n), 0);
    for (int k = 0; k < n; ++k) {
        const int iend = std::min(n - 1, k + ml);
        int p = k;
        double pmax = std::abs(m_.get(k, k));
        for (int i = k + 1; i <= iend; ++i) {
            const double v = std::abs(m_.get(i, k));
            if (v > pmax) {
                pmax = v;
                p = i;
            }
        }
        piv_[static_cast<size_t>(k)] = p;
        if (pmax == 0.0) return false;
        const int jend = std::min(n - 1, k + ml + mu);
        if (p != k)
            for (int j = k; j <= jend; ++j) std::swap(m_.at(k, j), m_.at(p, j));
        const double pivot = m_.get(k, k);
        for (int i = k + 1; i <= iend; ++i) {
            const double l = m_.get(i, k) / pivot;
            m_.at(i, k) = l;
            if (l != 0.0)
                for (int j = k + 1; j <= jend; ++j) m_.at(i, j) -= l * m_.get(k, j);
        }
    }
    return true;
}

void BandedLu::solve(std::vector<double>& b) const {
    const int n = m_.n_, ml = m_.ml_, mu = m_.mu_;
    for (int k = 0; k < n; ++k) {
        const int p = piv_[static_cast<size_t>(k)];
        if (p != k) std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(p)]);
        const int iend = std::min(n - 1, k + ml);
        const double bk = b[static_cast<size_t>(k)];
        if (bk != 0.0)
            for (int i = k + 1; i <= iend; ++i)
                b[static_cast<size_t>(i)] -= m_.get(i, k) * bk;
    }
    for (int k = n - 1; k >= 0; --k) {
        const int jend = std::min(n - 1, k + ml + mu);
        double s = b[static_cast<size_t>(k)];
        for (int j = k + 1; j <= jend; ++j) s -= m_.get(k, j) * b[static_cast<size_t>(j)];
        b[static_cast<size_t>(k)] = s / m_.get(k, k);
    }
}

bool SpikedBandedLu::factor(BandedMatrix band,
                            std::vector<std::pair<int, std::vector<double>>> spikes) {
    if (!lu_.factor(std::move(band))) return false;
    k_ = static_cast<int>(spikes.size());
    cols_.clear();
    z_.clear();
    if (k_ == 0) return true;
    for (auto& [col, w] : spikes) {
        cols_.push_back(col);
        lu_.solve(w); // w := B^{-1} w
        z_.push_back(std::move(w));
    }
    // G = I - E^T Z, then invert the small k x k system.
    std::vector<double> g(static_cast<size_t>(k_ * k_), 0.0);
    for (int r = 0; r < k_; ++r)
        for (int c = 0; c < k_; ++c) {
            const double zrc = z_[static_cast<size_t>(c)][static_cast<size_t>(cols_[static_cast<size_t>(r)])];
            g[static_cast<size_t>(r * k_ + c)] = (r == c ? 1.0 : 0.0) - zrc;
        }
    // Gauss-Jordan inverse with partial pivoting; k <= 4 so cost is nil.
    ginv_.assign(static_cast<size_t>(k_ * k_), 0.0);
    for (int i = 0; i < k_; ++i) ginv_[static_cast<size_t>(i * k_ + i)] = 1.0;
    for (int c = 0; c < k_; ++c) {
        int p = c;
        for (int r = c + 1; r < k_; ++r)
            if (std::abs(g[static_cast<size_t>(r * k_ + c)]) >
                std::abs(g[static_cast<size_t>(p * k_ + c)]))
                p = r;
        if (g[static_cast<size_t>(p * k_ + c)] == 0.0) return false;
        if (p != c)
            for (int j = 0; j < k_; ++j) {
                std::swap(g[static_cast<size_t>(c * k_ + j)], g[static_cast<size_t>(p * k_ + j)]);
                std::swap(ginv_[static_cast<size_t>(c * k_ + j)],
                          ginv_[static_cast<size_t>(p * k_ + j)]);
            }
        const double d = g[static_cast<size_t>(c * k_ + c)];
        for (int j = 0; j < k_; ++j) {
            g[static_cast<size_t>(c * k_ + j)] /= d;
            ginv_[static_cast<size_t>(c * k_ + j)] /= d;
        }
        for (int r = 0; r < k_; ++r) {
            if (r == c) continue;
            const double f = g[static_cast<size_t>(r * k_ + c)];
            if (f == 0.0) continue;
            for (int j = 0; j < k_; ++j) {
                g[static_cast<size_t>(r * k_ + j)] -= f * g[static_cast<size_t>(c * k_ + j)];
                ginv_[static_cast<size_t>(r * k_ + j)] -= f * ginv_[static_cast<size_t>(c * k_ + j)];
            }
        }
    }
    return true;
}

void SpikedBandedLu::solve(std::vector<double>& b) const {
    lu_.solve(b);
    if (k_ == 0) return;
    // x = y + Z * G^{-1} * (y at spike rows)
    std::vector<double> s(static_cast<size_t>(k_));
    for (int r = 0; r < k_; ++r) s[static_cast<size_t>(r)] = b[static_cast<size_t>(cols_[static_cast<size_t>(r)])];
    std::vector<double> t(static_cast<size_t>(k_), 0.0);
    for (int r = 0; r < k_; ++r)
        for (int c = 0; c < k_; ++c)
            t[static_cast<size_t>(r)] += ginv_[static_cast<size_t>(r * k_ + c)] * s[static_cast<size_t>(c)];
    for (int c = 0; c < k_; ++c) {
        const double tc = t[static_cast<size_t>(c)];
        if (tc == 0.0) continue;
        const std::vector<double>& zc = z_[static_cast<size_t>(c)];
        for (size_t i = 0; i < b.size(); ++i) b[i] += zc[i] * tc;
    }
}

} // namespace shellrg
