#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include "badapprox/polynomial.hpp"

namespace badapprox {

namespace detail {

/// Exact dense matrix over Q, just enough linear algebra for this project.
class QMatrix {
    size_t n_, m_;
    std::vector<Rat> a_;

public:
    QMatrix(size_t n, size_t m) : n_(n), m_(m), a_(n * m, Rat(0)) {}
    static QMatrix identity(size_t n) {
        QMatrix I(n, n);
        for (size_t i = 0; i < n; ++i) I(i, i) = 1;
        return I;
    }
    size_t rows() const { return n_; }
    size_t cols() const { return m_; }
    Rat& operator()(size_t i, size_t j) { return a_[i * m_ + j]; }
    const Rat& operator()(size_t i, size_t j) const { return a_[i * m_ + j]; }

    bool operator==(const QMatrix& o) const { return n_ == o.n_ && m_ == o.m_ && a_ == o.a_; }

    QMatrix operator*(const QMatrix& o) const {
        QMatrix r(n_, o.m_);
        for (size_t i = 0; i < n_; ++i)
            for (size_t k = 0; k < m_; ++k) {
                if ((*this)(i, k) == 0) continue;
                for (size_t j = 0; j < o.m_; ++j) r(i, j) += (*this)(i, k) * o(k, j);
            }
        return r;
    }

    std::vector<Rat> apply(const std::vector<Rat>& v) const {
        std::vector<Rat> r(n_, Rat(0));
        for (size_t i = 0; i < n_; ++i)
            for (size_t j = 0; j < m_; ++j)
                if ((*this)(i, j) != 0) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    std::optional<QMatrix> inverse() const {
        if (n_ != m_) return std::nullopt;
        QMatrix aug = *this, inv = identity(n_);
        for (size_t col = 0; col < n_; ++col) {
            size_t piv = col;
            while (piv < n_ && aug(piv, col) == 0) ++piv;
            if (piv == n_) return std::nullopt;
            if (piv != col)
                for (size_t j = 0; j < n_; ++j) {
                    std::swap(aug(piv, j), aug(col, j));
                    std::swap(inv(piv, j), inv(col, j));
                }
            Rat p = aug(col, col);
            for (size_t j = 0; j < n_; ++j) {
                aug(col, j) /= p;
                inv(col, j) /= p;
            }
            for (size_t i = 0; i < n_; ++i) {
                if (i == col || aug(i, col) == 0) continue;
                Rat f = aug(i, col);
                for (size_t j = 0; j < n_; ++j) {
                    aug(i, j) -= f * aug(col, j);
                    inv(i, j) -= f * inv(col, j);
                }
            }
        }
        return inv;
    }

    // Basis of the kernel, as coordinate vectors.
    std::vector<std::vector<Rat>> kernel() const {
        QMatrix a = *this;
        std::vector<long> pivot_of_col(m_, -1);
        size_t row = 0;
        for (size_t col = 0; col < m_ && row < n_; ++col) {
            size_t piv = row;
            while (piv < n_ && a(piv, col) == 0) ++piv;
            if (piv == n_) continue;
            if (piv != row)
                for (size_t j = 0; j < m_; ++j) std::swap(a(piv, j), a(row, j));
            Rat p = a(row, col);
            for (size_t j = 0; j < m_; ++j) a(row, j) /= p;
            for (size_t i = 0; i < n_; ++i) {
                if (i == row || a(i, col) == 0) continue;
                Rat f = a(i, col);
                for (size_t j = 0; j < m_; ++j) a(i, j) -= f * a(row, j);
            }
            pivot_of_col[col] = static_cast<long>(row);
            ++row;
        }
        std::vector<std::vector<Rat>> basis;
        for (size_t col = 0; col < m_; ++col) {
            if (pivot_of_col[col] >= 0) continue;
            std::vector<Rat> v(m_, Rat(0));
            v[col] = 1;
            for (size_t c = 0; c < m_; ++c)
                if (pivot_of_col[c] >= 0) v[c] = -a(static_cast<size_t>(pivot_of_col[c]), col);
            basis.push_back(std::move(v));
        }
        return basis;
    }
};

// Numeric roots via Durand-Kerner; candidates only, callers verify exactly.
inline std::vector<std::complex<double>> dk_roots(const RatPoly& f) {
    int d = f.degree();
    std::vector<std::complex<double>> c(d + 1);
    for (int i = 0; i <= d; ++i) c[i] = f.coeff(i).get_d();
    for (int i = 0; i <= d; ++i) c[i] /= c[d].real();
    std::vector<std::complex<double>> z(d);
    std::complex<double> seed(0.4, 0.9);
    std::complex<double> acc(1.0, 0.0);
    for (int i = 0; i < d; ++i) {
        acc *= seed;
        z[i] = acc;
    }
    auto eval = [&](std::complex<double> x) {
        std::complex<double> r = 0;
        for (int i = d; i >= 0; --i) r = r * x + c[i];
        return r;
    };
    for (int iter = 0; iter < 500; ++iter) {
        double moved = 0;
        for (int i = 0; i < d; ++i) {
            std::complex<double> denom(1.0, 0.0);
            for (int j = 0; j < d; ++j)
                if (j != i) denom *= (z[i] - z[j]);
            if (std::abs(denom) < 1e-300) continue;
            std::complex<double> delta = eval(z[i]) / denom;
            z[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    return z;
}

} // namespace detail

class FieldElem;

/// A number field Q[x]/(f) with f monic, integral, squarefree. The signature
/// is computed exactly by Sturm counting. The order used downstream is
/// Z[theta] unless a finer integral basis is supplied.
class NumberField : public std::enable_shared_from_this<NumberField> {
    RatPoly f_;
    int degree_;
    int r_ = 0, s_ = 0;
    detail::QMatrix basis_;      // column j = power coords of basis elem j
    detail::QMatrix basis_inv_;  // maps power coords -> integral-basis coords
    bool power_basis_ = true;
    // theta^k mod f for k = d .. 2d-2 (power-basis coordinates).
    std::vector<std::vector<Rat>> high_powers_;

    struct Key { explicit Key() = default; };

    std::vector<Rat> reduce_raw(const std::vector<Rat>& a, const std::vector<Rat>& b) const {
        size_t d = static_cast<size_t>(degree_);
        std::vector<Rat> prod(2 * d - 1, Rat(0));
        for (size_t i = 0; i < d; ++i) {
            if (a[i] == 0) continue;
            for (size_t j = 0; j < d; ++j)
                if (b[j] != 0) prod[i + j] += a[i] * b[j];
        }
        std::vector<Rat> r(prod.begin(), prod.begin() + d);
        for (size_t k = d; k < prod.size(); ++k) {
            if (prod[k] == 0) continue;
            const auto& rep = high_powers_[k - d];
            for (size_t i = 0; i < d; ++i) r[i] += prod[k] * rep[i];
        }
        return r;
    }

    void screen_reducible() const {
        if (degree_ < 2 || degree_ > 24) return;
        auto roots = detail::dk_roots(f_);
        size_t n = roots.size();
        for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
            if (__builtin_popcount(mask) > degree_ / 2) continue;
            std::vector<std::complex<double>> prod{std::complex<double>(1.0, 0.0)};
            for (size_t i = 0; i < n; ++i) {
                if (!(mask & (1u << i))) continue;
                // multiply running monic polynomial by (x - roots[i])
                prod.push_back(prod.back());
                for (size_t k = prod.size() - 2; k >= 1; --k)
                    prod[k] = prod[k - 1] - roots[i] * prod[k];
                prod[0] = -roots[i] * prod[0];
            }
            bool near_int = true;
            std::vector<Rat> cand(prod.size());
            for (size_t k = 0; k < prod.size(); ++k) {
                double re = prod[k].real(), im = prod[k].imag();
                if (std::abs(im) > 1e-6 || std::abs(re - std::round(re)) > 1e-6 ||
                    std::abs(re) > 9e15) {
                    near_int = false;
                    break;
                }
                cand[k] = Rat(static_cast<long>(std::llround(re)));
            }
            if (!near_int) continue;
            RatPoly g(cand);
            if (g.degree() < 1 || g.degree() >= degree_) continue;
            if (f_.divrem(g).second.is_zero())
                throw ReducibleDetected("defining polynomial has a factor of degree " +
                                        std::to_string(g.degree()));
        }
    }

public:
    NumberField(Key, RatPoly f, std::optional<std::vector<std::vector<Rat>>> basis)
        : f_(std::move(f)), degree_(f_.degree()), basis_(1, 1), basis_inv_(1, 1) {
        if (degree_ < 1) throw Error("defining polynomial must have degree >= 1");
        if (!f_.is_monic()) throw Error("defining polynomial must be monic");
        if (!f_.is_integral()) throw Error("defining polynomial must have integer coefficients");
        if (!is_squarefree(f_)) throw NotSquarefree("defining polynomial is not squarefree");

        size_t d = static_cast<size_t>(degree_);
        SturmSeq sturm(f_);
        r_ = sturm.count_real_roots();
        if ((degree_ - r_) % 2 != 0) throw Error("internal: signature parity");
        s_ = (degree_ - r_) / 2;

        screen_reducible();

        high_powers_.clear();
        if (d >= 2) {
            std::vector<Rat> cur(d, Rat(0));
            for (size_t i = 0; i < d; ++i) cur[i] = -f_.coeff(i);
            high_powers_.push_back(cur);
            for (size_t k = 1; k + 1 < d; ++k) {
                std::vector<Rat> nxt(d, Rat(0));
                for (size_t i = 0; i + 1 < d; ++i) nxt[i + 1] = cur[i];
                if (cur[d - 1] != 0)
                    for (size_t i = 0; i < d; ++i) nxt[i] += cur[d - 1] * high_powers_[0][i];
                high_powers_.push_back(nxt);
                cur = high_powers_.back();
            }
        }

        basis_ = detail::QMatrix::identity(d);
        basis_inv_ = detail::QMatrix::identity(d);
        if (basis) {
            if (basis->size() != d) throw Error("integral basis must have d elements");
            detail::QMatrix P(d, d);
            for (size_t j = 0; j < d; ++j) {
                if ((*basis)[j].size() != d) throw Error("integral basis coordinate length");
                for (size_t i = 0; i < d; ++i) P(i, j) = (*basis)[j][i];
            }
            auto inv = P.inverse();
            if (!inv) throw Error("integral basis is singular");
            std::vector<Rat> one_pow(d, Rat(0));
            one_pow[0] = 1;
            for (const auto& c : inv->apply(one_pow))
                if (!is_integer(c)) throw Error("integral basis does not contain 1 over Z");
            std::vector<std::vector<Rat>> cols(d);
            for (size_t j = 0; j < d; ++j) {
                cols[j].resize(d);
                for (size_t i = 0; i < d; ++i) cols[j][i] = P(i, j);
            }
            for (size_t i = 0; i < d; ++i)
                for (size_t j = i; j < d; ++j) {
                    auto prodv = reduce_raw(cols[i], cols[j]);
                    for (const auto& c : inv->apply(prodv))
                        if (!is_integer(c))
                            throw Error("integral basis is not multiplicatively closed over Z");
                }
            basis_ = P;
            basis_inv_ = *inv;
            power_basis_ = false;
        }
    }

    static std::shared_ptr<const NumberField> create(
        const RatPoly& f,
        std::optional<std::vector<std::vector<Rat>>> integral_basis = std::nullopt) {
        return std::make_shared<const NumberField>(Key{}, f, std::move(integral_basis));
    }

    const RatPoly& poly() const { return f_; }
    int degree() const { return degree_; }
    int real_places() const { return r_; }
    int complex_places() const { return s_; }
    int num_places() const { return r_ + s_; }
    bool is_rationals() const { return degree_ == 1; }
    bool has_power_basis() const { return power_basis_; }
    const detail::QMatrix& basis_matrix() const { return basis_; }
    const detail::QMatrix& basis_matrix_inv() const { return basis_inv_; }

    Int discriminant_of_poly() const;

    FieldElem zero() const;
    FieldElem one() const;
    FieldElem theta() const;
    FieldElem from_rat(const Rat& r) const;
    FieldElem elem(std::vector<Rat> power_coords) const;
    FieldElem elem_from_basis(const std::vector<Rat>& basis_coords) const;

    std::vector<Rat> reduce_product(const std::vector<Rat>& a, const std::vector<Rat>& b) const {
        return reduce_raw(a, b);
    }
};

using FieldPtr = std::shared_ptr<const NumberField>;

/// Element of a number field; exact power-basis coordinates, arithmetic mod f.
class FieldElem {
    FieldPtr F_;
    std::vector<Rat> co_;

    void check_same(const FieldElem& o) const {
        if (F_.get() != o.F_.get()) throw MixedFields("elements of different fields");
    }

public:
    FieldElem() = default;
    FieldElem(FieldPtr F, std::vector<Rat> coords) : F_(std::move(F)), co_(std::move(coords)) {
        if (static_cast<int>(co_.size()) != F_->degree())
            throw Error("coordinate vector length mismatch");
    }

    const FieldPtr& field() const { return F_; }
    const std::vector<Rat>& coords() const { return co_; }

    bool is_zero() const {
        for (const auto& c : co_)
            if (c != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (size_t i = 1; i < co_.size(); ++i)
            if (co_[i] != 0) return false;
        return true;
    }
    Rat rational_value() const {
        if (!is_rational()) throw Error("not a rational element");
        return co_[0];
    }

    bool operator==(const FieldElem& o) const { return F_.get() == o.F_.get() && co_ == o.co_; }
    bool operator!=(const FieldElem& o) const { return !(*this == o); }

    FieldElem operator+(const FieldElem& o) const {
        check_same(o);
        std::vector<Rat> r(co_);
        for (size_t i = 0; i < r.size(); ++i) r[i] += o.co_[i];
        return {F_, std::move(r)};
    }
    FieldElem operator-(const FieldElem& o) const {
        check_same(o);
        std::vector<Rat> r(co_);
        for (size_t i = 0; i < r.size(); ++i) r[i] -= o.co_[i];
        return {F_, std::move(r)};
    }
    FieldElem operator-() const {
        std::vector<Rat> r(co_);
        for (auto& c : r) c = -c;
        return {F_, std::move(r)};
    }
    FieldElem operator*(const FieldElem& o) const {
        check_same(o);
        return {F_, F_->reduce_product(co_, o.co_)};
    }
    FieldElem operator*(const Rat& s) const {
        std::vector<Rat> r(co_);
        for (auto& c : r) c *= s;
        return {F_, std::move(r)};
    }

    RatPoly coord_poly() const { return RatPoly(co_); }

    FieldElem inverse() const {
        if (is_zero()) throw DivisionByZero("inverse of zero field element");
        auto eg = ext_gcd(coord_poly(), F_->poly());
        if (eg.g.degree() != 0) {
            // A nontrivial common factor with f exposes a zero divisor, so f
            // was reducible after all.
            throw ReducibleDetected("zero divisor encountered; defining polynomial is reducible");
        }
        RatPoly u = (eg.u * (Rat(1) / eg.g.coeff(0))).divrem(F_->poly()).second;
        std::vector<Rat> r(F_->degree(), Rat(0));
        for (int i = 0; i <= u.degree(); ++i) r[static_cast<size_t>(i)] = u.coeff(i);
        return {F_, std::move(r)};
    }
    FieldElem operator/(const FieldElem& o) const { return *this * o.inverse(); }

    FieldElem pow(unsigned long e) const {
        FieldElem acc = F_->one(), base = *this;
        while (e) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    std::vector<Rat> basis_coords() const { return F_->basis_matrix_inv().apply(co_); }
    bool is_integral() const {
        for (const auto& c : basis_coords())
            if (!is_integer(c)) return false;
        return true;
    }

    std::string to_string() const {
        std::string s;
        bool first = true;
        for (size_t i = 0; i < co_.size(); ++i) {
            if (co_[i] == 0) continue;
            if (!first) s += " + ";
            s += badapprox::to_string(co_[i]);
            if (i == 1) s += "*t";
            if (i > 1) s += "*t^" + std::to_string(i);
            first = false;
        }
        return first ? "0" : s;
    }
};

inline FieldElem NumberField::zero() const {
    return FieldElem(shared_from_this(), std::vector<Rat>(degree_, Rat(0)));
}
inline FieldElem NumberField::one() const { return from_rat(Rat(1)); }
inline FieldElem NumberField::from_rat(const Rat& r) const {
    std::vector<Rat> c(degree_, Rat(0));
    c[0] = r;
    return FieldElem(shared_from_this(), std::move(c));
}
inline FieldElem NumberField::theta() const {
    std::vector<Rat> c(degree_, Rat(0));
    if (degree_ == 1)
        c[0] = -f_.coeff(0);
    else
        c[1] = 1;
    return FieldElem(shared_from_this(), std::move(c));
}
inline FieldElem NumberField::elem(std::vector<Rat> power_coords) const {
    return FieldElem(shared_from_this(), std::move(power_coords));
}
inline FieldElem NumberField::elem_from_basis(const std::vector<Rat>& basis_coords) const {
    return FieldElem(shared_from_this(), basis_.apply(basis_coords));
}

inline Int NumberField::discriminant_of_poly() const {
    // disc(f) = (-1)^{d(d-1)/2} Res(f, f') for monic f, via Sylvester matrix.
    RatPoly fp = f_.derivative();
    int d = degree_, e = fp.degree();
    if (d == 1) return Int(1);
    size_t n = static_cast<size_t>(d + e);
    detail::QMatrix S(n, n);
    for (int row = 0; row < e; ++row)
        for (int k = 0; k <= d; ++k)
            S(static_cast<size_t>(row), static_cast<size_t>(row + d - k)) = f_.coeff(k);
    for (int row = 0; row < d; ++row)
        for (int k = 0; k <= e; ++k)
            S(static_cast<size_t>(e + row), static_cast<size_t>(row + e - k)) = fp.coeff(k);
    Rat det(1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && S(piv, col) == 0) ++piv;
        if (piv == n) return Int(0);
        if (piv != col) {
            for (size_t j = 0; j < n; ++j) std::swap(S(piv, j), S(col, j));
            det = -det;
        }
        det *= S(col, col);
        Rat p = S(col, col);
        for (size_t i = col + 1; i < n; ++i) {
            if (S(i, col) == 0) continue;
            Rat f = S(i, col) / p;
            for (size_t j = col; j < n; ++j) S(i, j) -= f * S(col, j);
        }
    }
    if ((d * (d - 1) / 2) % 2 != 0) det = -det;
    if (!is_integer(det)) throw Error("internal: non-integral discriminant");
    return det.get_num();
}

} // namespace badapprox
