#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qlab {

// Exact ratio of 64-bit integers. Security values and tolerance bands are
// compared exactly, never through floating point.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t value) : num_(value), den_(1) {}
    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    // Accepts "3", "-3", "0.25" and "2/7".
    static Rational parse(const std::string& text) {
        if (text.empty()) throw std::invalid_argument("Rational::parse: empty string");
        auto slash = text.find('/');
        if (slash != std::string::npos) {
            std::int64_t n = std::stoll(text.substr(0, slash));
            std::int64_t d = std::stoll(text.substr(slash + 1));
            return Rational(n, d);
        }
        auto dot = text.find('.');
        if (dot == std::string::npos) return Rational(std::stoll(text));
        bool neg = text[0] == '-';
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        if (neg) digits = digits.substr(1);
        std::int64_t den = 1;
        for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
        std::int64_t num = digits.empty() ? 0 : std::stoll(digits);
        return Rational(neg ? -num : num, den);
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }

private:
    void normalize() {
        if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    std::int64_t num_;
    std::int64_t den_;
};

}  // namespace qlab
