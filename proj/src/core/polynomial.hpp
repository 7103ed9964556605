#pragma once

#include <map>
#include <string>
#include <vector>

#include "vec2.hpp"

namespace blab {

struct Jet2 {
    double value = 0.0;
    double fx = 0.0, fy = 0.0;
    double fxx = 0.0, fxy = 0.0, fyy = 0.0;

    Vec2 gradient() const { return {fx, fy}; }
};

// Sparse real polynomial in a fixed number of variables, keyed by exponent
// tuples. Zero coefficients are pruned so the term map is canonical.
class Multinomial {
  public:
    explicit Multinomial(int arity);
    static Multinomial constant(int arity, double c);
    static Multinomial variable(int arity, int index);

    int arity() const { return arity_; }
    const std::map<std::vector<int>, double>& terms() const { return c_; }
    void add(const std::vector<int>& exps, double c);
    double coeff(const std::vector<int>& exps) const;
    bool is_zero() const { return c_.empty(); }
    int degree() const;  // total degree, -1 for the zero polynomial
    double max_abs_coeff() const;
    bool is_homogeneous(int* deg = nullptr) const;

    double eval(const std::vector<double>& at) const;
    Multinomial derivative(int index) const;
    Multinomial scaled(double k) const;
    Multinomial pow(int n) const;

    Multinomial operator+(const Multinomial& o) const;
    Multinomial operator-(const Multinomial& o) const;
    Multinomial operator*(const Multinomial& o) const;

  private:
    int arity_;
    std::map<std::vector<int>, double> c_;
    void prune();
};

// Parses an arithmetic expression over the named variables into a
// multinomial. Supported: +, -, *, ^ with nonnegative integer exponents,
// parentheses, decimal literals. Multiplication is always explicit.
Multinomial parse_multinomial(const std::string& text,
                              const std::vector<std::string>& vars);

class BivariatePolynomial {
  public:
    BivariatePolynomial();
    explicit BivariatePolynomial(Multinomial m);
    static BivariatePolynomial parse(const std::string& text);
    static BivariatePolynomial constant(double c);
    static BivariatePolynomial x();
    static BivariatePolynomial y();

    const Multinomial& raw() const { return m_; }
    bool is_zero() const { return m_.is_zero(); }
    int degree() const { return m_.degree(); }
    double max_abs_coeff() const { return m_.max_abs_coeff(); }
    double coeff(int i, int j) const;

    double eval(double px, double py) const;
    double eval(Vec2 p) const { return eval(p.x, p.y); }
    // Sum of |c|*|x|^i*|y|^j: the magnitude against which residuals of
    // eval(p) are meaningfully compared.
    double eval_scale(Vec2 p) const;
    Jet2 jet(Vec2 p) const;
    // Same jet with value and gradient accumulated in double-double; the
    // second derivatives stay plain. Meant for refining nearly singular
    // points past the plain-double noise floor.
    Jet2 jet_dd(Vec2 p) const;
    Vec2 gradient(Vec2 p) const;

    BivariatePolynomial dx() const;
    BivariatePolynomial dy() const;
    // q(u, v) = p(origin.x + u, origin.y + v). Coefficients accumulate in
    // double-double so the small low-order terms of a germ at a singular
    // point survive the cancellation against the large input coefficients.
    BivariatePolynomial shifted(Vec2 origin) const;
    // q(u, v) = p(u cos t - v sin t, u sin t + v cos t).
    BivariatePolynomial rotated(double t) const;
    BivariatePolynomial homogeneous_part(int k) const;
    // Smallest k whose homogeneous part has a coefficient above tol;
    // -1 when no part qualifies.
    int lowest_degree(double tol) const;

    BivariatePolynomial operator+(const BivariatePolynomial& o) const;
    BivariatePolynomial operator-(const BivariatePolynomial& o) const;
    BivariatePolynomial operator*(const BivariatePolynomial& o) const;
    BivariatePolynomial scaled(double k) const;
    BivariatePolynomial pow(int n) const;

    // Canonical text: `c*x^i*y^j` terms joined by " + ", graded order
    // (total degree descending, then x-exponent descending), coefficients
    // in shortest round-trip decimal.
    std::string to_string() const;

  private:
    Multinomial m_;
};

// Polynomial in boundary position and velocity, variables (x, y, v1, v2).
class PhasePolynomial {
  public:
    PhasePolynomial();
    explicit PhasePolynomial(Multinomial m);
    static PhasePolynomial parse(const std::string& text);
    double eval(Vec2 pos, Vec2 vel) const;
    const Multinomial& raw() const { return m_; }

  private:
    Multinomial m_;
};

// Polynomial in (sigma, v1, v2) with sigma the angular momentum x*v2 - y*v1.
class SigmaPolynomial {
  public:
    explicit SigmaPolynomial(Multinomial m);
    static SigmaPolynomial parse(const std::string& text);
    double eval(double sigma, Vec2 vel) const;
    bool is_homogeneous(int* deg = nullptr) const;
    const Multinomial& raw() const { return m_; }

  private:
    Multinomial m_;
};

}  // namespace blab
