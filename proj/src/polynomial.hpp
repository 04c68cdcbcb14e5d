#pragma once

#include <algorithm>
#include <cstddef>
#include <type_traits>
#include <vector>

namespace profilium {

// Dense polynomial in z; c[i] is the coefficient of z^i. Trailing zeros are trimmed.
template <class T>
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<T> c) : c_(std::move(c)) { trim(); }
    static Polynomial constant(const T& a) { return Polynomial(std::vector<T>{a}); }
    static Polynomial monomial(std::size_t k, const T& a)
    {
        std::vector<T> c(k + 1, T(0));
        c[k] = a;
        return Polynomial(std::move(c));
    }

    const std::vector<T>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    T operator[](std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }

    template <class X>
    X operator()(const X& z) const
    {
        X acc = X(0);
        for (std::size_t i = c_.size(); i-- > 0;)
            acc = acc * z + X(c_[i]);
        return acc;
    }

    Polynomial derivative(int order = 1) const
    {
        Polynomial d = *this;
        for (int o = 0; o < order; ++o) {
            if (d.c_.size() <= 1)
                return Polynomial();
            std::vector<T> n(d.c_.size() - 1);
            for (std::size_t i = 1; i < d.c_.size(); ++i)
                n[i - 1] = d.c_[i] * T(static_cast<long>(i));
            d = Polynomial(std::move(n));
        }
        return d;
    }

    Polynomial pow(int e) const
    {
        Polynomial r = constant(T(1));
        for (int i = 0; i < e; ++i)
            r = r * *this;
        return r;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b)
    {
        std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b)
    {
        std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.c_.empty() || b.c_.empty())
            return Polynomial();
        std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator*(const T& s, const Polynomial& a)
    {
        std::vector<T> r = a.c_;
        for (auto& x : r) x *= s;
        return Polynomial(std::move(r));
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == T(0))
            c_.pop_back();
    }
    std::vector<T> c_;
};

template <class To, class From>
Polynomial<To> convert(const Polynomial<From>& a)
{
    std::vector<To> c;
    c.reserve(a.coeffs().size());
    for (const auto& x : a.coeffs()) {
        if constexpr (std::is_same_v<To, double> && !std::is_arithmetic_v<From>)
            c.push_back(x.get_d());
        else
            c.push_back(To(x));
    }
    return Polynomial<To>(std::move(c));
}

}  // namespace profilium
