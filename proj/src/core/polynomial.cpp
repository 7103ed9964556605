#include "polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "error.hpp"
#include "numfmt.hpp"

namespace blab {

namespace {

// Double-double value: hi + lo with |lo| <= ulp(hi)/2. Enough headroom to
// absorb the cancellation when a large polynomial is re-centered at a point
// where its low-order jets nearly vanish.
struct DD {
    double hi = 0.0, lo = 0.0;
};

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    double e = a.lo + b.lo + s.lo;
    double hi = s.hi + e;
    return {hi, e - (hi - s.hi)};
}

inline DD dd_mul(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    double e = a.hi * b.lo + a.lo * b.hi + p.lo;
    double hi = p.hi + e;
    return {hi, e - (hi - p.hi)};
}

inline DD dd_mul_d(DD a, double b) { return dd_mul(a, {b, 0.0}); }

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return std::round(r);
}

}  // namespace

// === Multinomial ===

Multinomial::Multinomial(int arity) : arity_(arity) {
    if (arity < 1 || arity > 8) fail(Errc::invalid_argument, "bad multinomial arity");
}

Multinomial Multinomial::constant(int arity, double c) {
    Multinomial m(arity);
    m.add(std::vector<int>(arity, 0), c);
    return m;
}

Multinomial Multinomial::variable(int arity, int index) {
    Multinomial m(arity);
    if (index < 0 || index >= arity) fail(Errc::invalid_argument, "bad variable index");
    std::vector<int> e(arity, 0);
    e[index] = 1;
    m.add(e, 1.0);
    return m;
}

void Multinomial::add(const std::vector<int>& exps, double c) {
    if (int(exps.size()) != arity_) fail(Errc::invalid_argument, "exponent arity mismatch");
    for (int e : exps)
        if (e < 0) fail(Errc::invalid_argument, "negative exponent");
    double& slot = c_[exps];
    slot += c;
    if (slot == 0.0) c_.erase(exps);
}

double Multinomial::coeff(const std::vector<int>& exps) const {
    auto it = c_.find(exps);
    return it == c_.end() ? 0.0 : it->second;
}

int Multinomial::degree() const {
    int d = -1;
    for (const auto& [e, c] : c_) {
        int t = 0;
        for (int k : e) t += k;
        d = std::max(d, t);
    }
    return d;
}

double Multinomial::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [e, c] : c_) m = std::max(m, std::abs(c));
    return m;
}

bool Multinomial::is_homogeneous(int* deg) const {
    if (c_.empty()) return false;
    int d = -1;
    for (const auto& [e, c] : c_) {
        int t = 0;
        for (int k : e) t += k;
        if (d < 0) d = t;
        else if (t != d) return false;
    }
    if (deg) *deg = d;
    return true;
}

double Multinomial::eval(const std::vector<double>& at) const {
    if (int(at.size()) != arity_) fail(Errc::invalid_argument, "evaluation arity mismatch");
    double s = 0.0;
    for (const auto& [e, c] : c_) {
        double t = c;
        for (int v = 0; v < arity_; ++v)
            for (int k = 0; k < e[v]; ++k) t *= at[v];
        s += t;
    }
    return s;
}

Multinomial Multinomial::derivative(int index) const {
    if (index < 0 || index >= arity_) fail(Errc::invalid_argument, "bad variable index");
    Multinomial out(arity_);
    for (const auto& [e, c] : c_) {
        if (e[index] == 0) continue;
        std::vector<int> d = e;
        d[index] -= 1;
        out.add(d, c * double(e[index]));
    }
    return out;
}

Multinomial Multinomial::scaled(double k) const {
    Multinomial out(arity_);
    if (k == 0.0) return out;
    for (const auto& [e, c] : c_) out.add(e, c * k);
    return out;
}

Multinomial Multinomial::pow(int n) const {
    if (n < 0) fail(Errc::invalid_argument, "negative power");
    Multinomial out = constant(arity_, 1.0);
    Multinomial base = *this;
    while (n > 0) {
        if (n & 1) out = out * base;
        base = base * base;
        n >>= 1;
    }
    return out;
}

Multinomial Multinomial::operator+(const Multinomial& o) const {
    if (o.arity_ != arity_) fail(Errc::invalid_argument, "arity mismatch");
    Multinomial out = *this;
    for (const auto& [e, c] : o.c_) out.add(e, c);
    return out;
}

Multinomial Multinomial::operator-(const Multinomial& o) const {
    return *this + o.scaled(-1.0);
}

Multinomial Multinomial::operator*(const Multinomial& o) const {
    if (o.arity_ != arity_) fail(Errc::invalid_argument, "arity mismatch");
    Multinomial out(arity_);
    std::vector<int> e(arity_);
    for (const auto& [ea, ca] : c_)
        for (const auto& [eb, cb] : o.c_) {
            for (int v = 0; v < arity_; ++v) e[v] = ea[v] + eb[v];
            out.add(e, ca * cb);
        }
    return out;
}

void Multinomial::prune() {
    for (auto it = c_.begin(); it != c_.end();)
        it = (it->second == 0.0) ? c_.erase(it) : std::next(it);
}

// === expression parser ===

namespace {

struct Token {
    enum Kind { Number, Ident, Plus, Minus, Star, Caret, LParen, RParen, End } kind;
    double number = 0.0;
    std::string ident;
    size_t pos = 0;
};

class Lexer {
  public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        tok_.pos = i_;
        if (i_ >= s_.size()) {
            tok_.kind = Token::End;
            return;
        }
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t j = i_;
            while (j < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[j])) || s_[j] == '.')) ++j;
            if (j < s_.size() && (s_[j] == 'e' || s_[j] == 'E')) {
                size_t k = j + 1;
                if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
                if (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) {
                    ++k;
                    while (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) ++k;
                    j = k;
                }
            }
            tok_.kind = Token::Number;
            tok_.number = parse_double(s_.substr(i_, j - i_));
            i_ = j;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i_;
            while (j < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
                ++j;
            tok_.kind = Token::Ident;
            tok_.ident = s_.substr(i_, j - i_);
            i_ = j;
            return;
        }
        ++i_;
        switch (c) {
            case '+': tok_.kind = Token::Plus; return;
            case '-': tok_.kind = Token::Minus; return;
            case '*': tok_.kind = Token::Star; return;
            case '^': tok_.kind = Token::Caret; return;
            case '(': tok_.kind = Token::LParen; return;
            case ')': tok_.kind = Token::RParen; return;
        }
        fail(Errc::invalid_argument,
             "unexpected character '" + std::string(1, c) + "' in polynomial expression");
    }

    const std::string& s_;
    size_t i_ = 0;
    Token tok_;
};

class ExprParser {
  public:
    ExprParser(const std::string& text, const std::vector<std::string>& vars)
        : lex_(text), vars_(vars) {}

    Multinomial run() {
        Multinomial m = expr();
        if (lex_.peek().kind != Token::End)
            fail(Errc::invalid_argument,
                 "unexpected token at position " + std::to_string(lex_.peek().pos) +
                     " in polynomial expression (multiplication must be explicit)");
        return m;
    }

  private:
    int arity() const { return int(vars_.size()); }

    Multinomial expr() {
        Multinomial m = term();
        while (lex_.peek().kind == Token::Plus || lex_.peek().kind == Token::Minus) {
            Token t = lex_.take();
            Multinomial rhs = term();
            m = (t.kind == Token::Plus) ? m + rhs : m - rhs;
        }
        return m;
    }

    Multinomial term() {
        Multinomial m = factor();
        while (lex_.peek().kind == Token::Star) {
            lex_.take();
            m = m * factor();
        }
        return m;
    }

    Multinomial factor() {
        Multinomial base = atom();
        if (lex_.peek().kind == Token::Caret) {
            lex_.take();
            Token e = lex_.take();
            if (e.kind != Token::Number || e.number < 0.0 ||
                e.number != std::floor(e.number) || e.number > 64.0)
                fail(Errc::invalid_argument, "exponent must be a small nonnegative integer");
            return base.pow(int(e.number));
        }
        return base;
    }

    Multinomial atom() {
        Token t = lex_.take();
        switch (t.kind) {
            case Token::Number:
                return Multinomial::constant(arity(), t.number);
            case Token::Ident: {
                for (int v = 0; v < arity(); ++v)
                    if (vars_[v] == t.ident) return Multinomial::variable(arity(), v);
                std::string allowed;
                for (const auto& n : vars_) allowed += (allowed.empty() ? "" : ", ") + n;
                fail(Errc::invalid_argument,
                     "unknown variable '" + t.ident + "' (allowed: " + allowed + ")");
            }
            case Token::Minus:
                return factor().scaled(-1.0);
            case Token::Plus:
                return factor();
            case Token::LParen: {
                Multinomial m = expr();
                if (lex_.take().kind != Token::RParen)
                    fail(Errc::invalid_argument, "missing ')' in polynomial expression");
                return m;
            }
            default:
                fail(Errc::invalid_argument,
                     "malformed polynomial expression at position " + std::to_string(t.pos));
        }
    }

    Lexer lex_;
    const std::vector<std::string>& vars_;
};

}  // namespace

Multinomial parse_multinomial(const std::string& text, const std::vector<std::string>& vars) {
    return ExprParser(text, vars).run();
}

// === BivariatePolynomial ===

BivariatePolynomial::BivariatePolynomial() : m_(2) {}

BivariatePolynomial::BivariatePolynomial(Multinomial m) : m_(std::move(m)) {
    if (m_.arity() != 2) fail(Errc::invalid_argument, "bivariate polynomial needs arity 2");
}

BivariatePolynomial BivariatePolynomial::parse(const std::string& text) {
    return BivariatePolynomial(parse_multinomial(text, {"x", "y"}));
}

BivariatePolynomial BivariatePolynomial::constant(double c) {
    return BivariatePolynomial(Multinomial::constant(2, c));
}

BivariatePolynomial BivariatePolynomial::x() {
    return BivariatePolynomial(Multinomial::variable(2, 0));
}

BivariatePolynomial BivariatePolynomial::y() {
    return BivariatePolynomial(Multinomial::variable(2, 1));
}

double BivariatePolynomial::coeff(int i, int j) const { return m_.coeff({i, j}); }

namespace {

// Power tables sized for the polynomial's largest per-variable exponent.
struct Powers {
    std::vector<double> px, py;
    Powers(const Multinomial& m, double x, double y) {
        int mx = 0, my = 0;
        for (const auto& [e, c] : m.terms()) {
            mx = std::max(mx, e[0]);
            my = std::max(my, e[1]);
        }
        px.resize(mx + 1);
        py.resize(my + 1);
        px[0] = py[0] = 1.0;
        for (int i = 1; i <= mx; ++i) px[i] = px[i - 1] * x;
        for (int j = 1; j <= my; ++j) py[j] = py[j - 1] * y;
    }
};

}  // namespace

double BivariatePolynomial::eval(double px, double py) const {
    Powers p(m_, px, py);
    double s = 0.0;
    for (const auto& [e, c] : m_.terms()) s += c * p.px[e[0]] * p.py[e[1]];
    return s;
}

double BivariatePolynomial::eval_scale(Vec2 q) const {
    Powers p(m_, std::abs(q.x), std::abs(q.y));
    double s = 0.0;
    for (const auto& [e, c] : m_.terms()) s += std::abs(c) * p.px[e[0]] * p.py[e[1]];
    return s;
}

Jet2 BivariatePolynomial::jet(Vec2 q) const {
    Powers p(m_, q.x, q.y);
    Jet2 out;
    for (const auto& [e, c] : m_.terms()) {
        int i = e[0], j = e[1];
        out.value += c * p.px[i] * p.py[j];
        if (i >= 1) out.fx += c * i * p.px[i - 1] * p.py[j];
        if (j >= 1) out.fy += c * j * p.px[i] * p.py[j - 1];
        if (i >= 2) out.fxx += c * i * (i - 1) * p.px[i - 2] * p.py[j];
        if (i >= 1 && j >= 1) out.fxy += c * i * j * p.px[i - 1] * p.py[j - 1];
        if (j >= 2) out.fyy += c * j * (j - 1) * p.px[i] * p.py[j - 2];
    }
    return out;
}

Jet2 BivariatePolynomial::jet_dd(Vec2 q) const {
    int mx = 0, my = 0;
    for (const auto& [e, c] : m_.terms()) {
        mx = std::max(mx, e[0]);
        my = std::max(my, e[1]);
    }
    std::vector<DD> px(mx + 1), py(my + 1);
    px[0] = py[0] = {1.0, 0.0};
    for (int i = 1; i <= mx; ++i) px[i] = dd_mul_d(px[i - 1], q.x);
    for (int j = 1; j <= my; ++j) py[j] = dd_mul_d(py[j - 1], q.y);

    DD v{}, gx{}, gy{};
    Jet2 plain = jet(q);
    for (const auto& [e, c] : m_.terms()) {
        int i = e[0], j = e[1];
        v = dd_add(v, dd_mul_d(dd_mul(px[i], py[j]), c));
        if (i >= 1) gx = dd_add(gx, dd_mul_d(dd_mul(px[i - 1], py[j]), c * i));
        if (j >= 1) gy = dd_add(gy, dd_mul_d(dd_mul(px[i], py[j - 1]), c * j));
    }
    Jet2 out = plain;
    out.value = v.hi + v.lo;
    out.fx = gx.hi + gx.lo;
    out.fy = gy.hi + gy.lo;
    return out;
}

Vec2 BivariatePolynomial::gradient(Vec2 q) const {
    Jet2 j = jet(q);
    return {j.fx, j.fy};
}

BivariatePolynomial BivariatePolynomial::dx() const {
    return BivariatePolynomial(m_.derivative(0));
}

BivariatePolynomial BivariatePolynomial::dy() const {
    return BivariatePolynomial(m_.derivative(1));
}

BivariatePolynomial BivariatePolynomial::shifted(Vec2 origin) const {
    int mx = 0, my = 0;
    for (const auto& [e, c] : m_.terms()) {
        mx = std::max(mx, e[0]);
        my = std::max(my, e[1]);
    }
    std::vector<DD> ox(mx + 1), oy(my + 1);
    ox[0] = oy[0] = {1.0, 0.0};
    for (int i = 1; i <= mx; ++i) ox[i] = dd_mul_d(ox[i - 1], origin.x);
    for (int j = 1; j <= my; ++j) oy[j] = dd_mul_d(oy[j - 1], origin.y);

    std::map<std::pair<int, int>, DD> acc;
    for (const auto& [e, c] : m_.terms()) {
        int i = e[0], j = e[1];
        for (int ii = 0; ii <= i; ++ii)
            for (int jj = 0; jj <= j; ++jj) {
                DD t = dd_mul(ox[i - ii], oy[j - jj]);
                t = dd_mul_d(t, c * binomial(i, ii) * binomial(j, jj));
                DD& slot = acc[{ii, jj}];
                slot = dd_add(slot, t);
            }
    }
    Multinomial out(2);
    for (const auto& [key, v] : acc) {
        double c = v.hi + v.lo;
        if (c != 0.0) out.add({key.first, key.second}, c);
    }
    return BivariatePolynomial(out);
}

BivariatePolynomial BivariatePolynomial::rotated(double t) const {
    double c = std::cos(t), s = std::sin(t);
    Multinomial u = Multinomial::variable(2, 0);
    Multinomial v = Multinomial::variable(2, 1);
    Multinomial nx = u.scaled(c) - v.scaled(s);
    Multinomial ny = u.scaled(s) + v.scaled(c);
    Multinomial out(2);
    for (const auto& [e, coef] : m_.terms())
        out = out + (nx.pow(e[0]) * ny.pow(e[1])).scaled(coef);
    return BivariatePolynomial(out);
}

BivariatePolynomial BivariatePolynomial::homogeneous_part(int k) const {
    Multinomial out(2);
    for (const auto& [e, c] : m_.terms())
        if (e[0] + e[1] == k) out.add(e, c);
    return BivariatePolynomial(out);
}

int BivariatePolynomial::lowest_degree(double tol) const {
    int d = degree();
    for (int k = 0; k <= d; ++k)
        if (homogeneous_part(k).max_abs_coeff() > tol) return k;
    return -1;
}

BivariatePolynomial BivariatePolynomial::operator+(const BivariatePolynomial& o) const {
    return BivariatePolynomial(m_ + o.m_);
}

BivariatePolynomial BivariatePolynomial::operator-(const BivariatePolynomial& o) const {
    return BivariatePolynomial(m_ - o.m_);
}

BivariatePolynomial BivariatePolynomial::operator*(const BivariatePolynomial& o) const {
    return BivariatePolynomial(m_ * o.m_);
}

BivariatePolynomial BivariatePolynomial::scaled(double k) const {
    return BivariatePolynomial(m_.scaled(k));
}

BivariatePolynomial BivariatePolynomial::pow(int n) const {
    return BivariatePolynomial(m_.pow(n));
}

std::string BivariatePolynomial::to_string() const {
    std::vector<std::pair<std::vector<int>, double>> terms(m_.terms().begin(), m_.terms().end());
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        int da = a.first[0] + a.first[1], db = b.first[0] + b.first[1];
        if (da != db) return da > db;
        return a.first[0] > b.first[0];
    });
    if (terms.empty()) return "0*x^0*y^0";
    std::string out;
    for (const auto& [e, c] : terms) {
        if (!out.empty()) out += " + ";
        out += format_double(c) + "*x^" + std::to_string(e[0]) + "*y^" + std::to_string(e[1]);
    }
    return out;
}

// === PhasePolynomial ===

PhasePolynomial::PhasePolynomial() : m_(4) {}

PhasePolynomial::PhasePolynomial(Multinomial m) : m_(std::move(m)) {
    if (m_.arity() != 4) fail(Errc::invalid_argument, "phase polynomial needs arity 4");
}

PhasePolynomial PhasePolynomial::parse(const std::string& text) {
    return PhasePolynomial(parse_multinomial(text, {"x", "y", "v1", "v2"}));
}

double PhasePolynomial::eval(Vec2 pos, Vec2 vel) const {
    return m_.eval({pos.x, pos.y, vel.x, vel.y});
}

// === SigmaPolynomial ===

SigmaPolynomial::SigmaPolynomial(Multinomial m) : m_(std::move(m)) {
    if (m_.arity() != 3) fail(Errc::invalid_argument, "sigma polynomial needs arity 3");
}

SigmaPolynomial SigmaPolynomial::parse(const std::string& text) {
    return SigmaPolynomial(parse_multinomial(text, {"sigma", "v1", "v2"}));
}

double SigmaPolynomial::eval(double sigma, Vec2 vel) const {
    return m_.eval({sigma, vel.x, vel.y});
}

bool SigmaPolynomial::is_homogeneous(int* deg) const { return m_.is_homogeneous(deg); }

}  // namespace blab
