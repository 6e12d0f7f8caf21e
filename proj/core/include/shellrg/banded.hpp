#pragma once

#include <vector>

namespace shellrg {

/// Banded matrix in LAPACK-style storage with ml extra super-diagonals of
/// room for partial-pivoting fill-in. Entry (i,j) is stored for
/// j - mu - ml <= i <= j + ml; the logical band is |i - j| within (ml, mu).
class BandedMatrix {
public:
    BandedMatrix() = default;
    BandedMatrix(int n, int ml, int mu);

    int size() const { return n_; }
    int lower() const { return ml_; }
    int upper() const { return mu_; }

    double& at(int i, int j);
    double get(int i, int j) const;
    void clear();

    /// Dense expansion, for tests and diagnostics.
    std::vector<std::vector<double>> dense() const;

private:
    friend class BandedLu;
    int n_ = 0, ml_ = 0, mu_ = 0, ldab_ = 0;
    std::vector<double> a_; // column-major bands, ldab_ x n_

    int offset(int i, int j) const { return j * ldab_ + (i - j + mu_ + ml_); }
    bool stored(int i, int j) const {
        return i >= 0 && i < n_ && j >= 0 && j < n_ && i - j <= ml_ && j - i <= mu_ + ml_;
    }
};

/// LU factorization with partial pivoting of a banded matrix. The upper band
/// widens to ml+mu during elimination; the input matrix must have been built
/// with that headroom (BandedMatrix always reserves it).
class BandedLu {
public:
    /// Factors in place; returns false if a pivot vanishes (singular matrix).
    bool factor(BandedMatrix m);
    void solve(std::vector<double>& b) const;

private:
    BandedMatrix m_;
    std::vector<int> piv_;
};

/// Solves (B - sum_c w_c e_c^T) x = b where B is banded and a handful of
/// columns carry dense corrections (Woodbury identity, rank <= 4). Used for
/// the auxiliary-model Jacobian whose |u_N| factor couples every row to
/// shell N.
class SpikedBandedLu {
public:
    /// spikes[c] = (column index, dense correction vector w_c).
    bool factor(BandedMatrix band, std::vector<std::pair<int, std::vector<double>>> spikes);
    void solve(std::vector<double>& b) const;

private:
    BandedLu lu_;
    std::vector<int> cols_;
    std::vector<std::vector<double>> z_; // B^{-1} w_c
    std::vector<double> ginv_;           // inverse of (I - E^T Z), row-major k x k
    int k_ = 0;
};

} // namespace shellrg
