#include "bislant/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace bislant {

// ---------------------------------------------------------------------------
// Tangent fields
// ---------------------------------------------------------------------------

Eigen::VectorXd TangentField::eval(const Eigen::VectorXd& p) const {
    Eigen::VectorXd v(coeff.size());
    for (std::size_t i = 0; i < coeff.size(); ++i) v(static_cast<int>(i)) = coeff[i].eval(p);
    return v;
}

void TangentField::eval_jet(const Eigen::VectorXd& p, Eigen::VectorXd& value,
                            Eigen::MatrixXd& grad) const {
    const int k = static_cast<int>(coeff.size());
    value.resize(k);
    grad.resize(k, k);
    for (int i = 0; i < k; ++i) {
        const Jet2 j = coeff[static_cast<std::size_t>(i)].eval_jet2(p);
        value(i) = j.value;
        grad.row(i) = j.grad.transpose();
    }
}

TangentField field_sum(const TangentField& x, const TangentField& y) {
    TangentField s;
    s.display = x.display + " + " + y.display;
    s.coeff.reserve(x.coeff.size());
    for (std::size_t i = 0; i < x.coeff.size(); ++i)
        s.coeff.push_back(Expr::binary(BinaryOp::Add, x.coeff[i], y.coeff[i]));
    return s;
}

const Distribution* ImmersionSpec::find_distribution(const std::string& name) const {
    for (const auto& d : distributions)
        if (d.name == name) return &d;
    return nullptr;
}

const SlantClaim* ImmersionSpec::find_slant_claim(const std::string& dist) const {
    for (const auto& c : slant_claims)
        if (c.dist == dist) return &c;
    return nullptr;
}

// ---------------------------------------------------------------------------
// Spec-file parser (line oriented, see docs/dsl.md)
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

// Split on a separator character at paren depth zero.
std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

// Parse one tangent field: a sum of [expr*]d<coord> terms, e.g.
// "2*u*du - dw". Returns k coefficient expressions.
TangentField parse_field(const std::string& text, const std::vector<std::string>& chart,
                         int line_no) {
    const int k = static_cast<int>(chart.size());
    TangentField field;
    field.display = trim(text);
    std::vector<std::string> coeff_text(static_cast<std::size_t>(k));

    // split into signed terms at depth 0
    std::vector<std::pair<int, std::string>> terms;  // sign, term text
    int depth = 0, sign = 1;
    std::string cur;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if ((c == '+' || c == '-') && depth == 0 && !trim(cur).empty()) {
            terms.emplace_back(sign, trim(cur));
            cur.clear();
            sign = (c == '-') ? -1 : 1;
        } else if ((c == '+' || c == '-') && depth == 0 && trim(cur).empty()) {
            if (c == '-') sign = -sign;
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) terms.emplace_back(sign, trim(cur));
    if (terms.empty()) throw SpecError("empty tangent field", line_no);

    for (auto& [tsign, term] : terms) {
        int coord = -1;
        std::string rest;
        for (int i = 0; i < k; ++i) {
            const std::string tag = "d" + chart[static_cast<std::size_t>(i)];
            if (term.size() >= tag.size() &&
                term.compare(term.size() - tag.size(), tag.size(), tag) == 0) {
                // the tag must not be glued to an identifier tail (e.g. "xdu")
                const std::string head = trim(term.substr(0, term.size() - tag.size()));
                if (!head.empty() && (std::isalnum(static_cast<unsigned char>(head.back())) ||
                                      head.back() == '_'))
                    continue;
                coord = i;
                rest = head;
                break;
            }
        }
        if (coord < 0)
            throw SpecError("tangent field term '" + term + "' does not end in d<coordinate>",
                            line_no);
        std::string coeff;
        if (rest.empty()) {
            coeff = (tsign < 0) ? "-1" : "1";
        } else {
            if (rest.back() != '*')
                throw SpecError("expected '<expr>*' before coordinate in term '" + term + "'",
                                line_no);
            rest.pop_back();
            coeff = (tsign < 0 ? "-(" + rest + ")" : rest);
        }
        auto& slot = coeff_text[static_cast<std::size_t>(coord)];
        slot = slot.empty() ? coeff : slot + " + " + coeff;
    }

    for (int i = 0; i < k; ++i) {
        const std::string& t = coeff_text[static_cast<std::size_t>(i)];
        try {
            field.coeff.push_back(parse_expression(t.empty() ? "0" : t, chart));
        } catch (const ExprError& e) {
            throw SpecError(std::string("in tangent field coefficient: ") + e.what(), line_no);
        }
    }
    return field;
}

Expr parse_line_expr(const std::string& text, const std::vector<std::string>& chart,
                     int line_no) {
    try {
        return parse_expression(text, chart);
    } catch (const ExprError& e) {
        throw SpecError(e.what(), line_no);
    }
}

}  // namespace

ImmersionSpec load_spec(const std::string& text) {
    ImmersionSpec spec;
    spec.source_text = text;
    bool have_ambient = false, have_chart = false, have_map = false;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        std::string rest;
        std::getline(ls, rest);
        rest = trim(rest);

        if (kw == "ambient") {
            auto tokens = split_ws(rest);
            if (tokens.size() < 2) throw SpecError("ambient: expected '<n> signature ...' or '<n> matrix ...'", line_no);
            const int n = std::stoi(tokens[0]);
            if (tokens[1] == "signature") {
                if (static_cast<int>(tokens.size()) != n + 2)
                    throw SpecError("ambient: expected " + std::to_string(n) + " signature entries",
                                    line_no);
                std::vector<int> signs;
                for (int i = 0; i < n; ++i) {
                    const std::string& s = tokens[static_cast<std::size_t>(i + 2)];
                    if (s == "+" || s == "+1") signs.push_back(1);
                    else if (s == "-" || s == "-1") signs.push_back(-1);
                    else throw SpecError("ambient: bad signature entry '" + s + "'", line_no);
                }
                try {
                    spec.ambient = make_signature_structure(signs);
                } catch (const StructureError& e) {
                    throw SpecError(e.what(), line_no);
                }
            } else if (tokens[1] == "matrix") {
                if (static_cast<int>(tokens.size()) != n * n + 2)
                    throw SpecError("ambient: expected " + std::to_string(n * n) +
                                        " row-major matrix entries",
                                    line_no);
                Eigen::MatrixXd F(n, n);
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c)
                        F(r, c) = std::stod(tokens[static_cast<std::size_t>(2 + r * n + c)]);
                try {
                    spec.ambient = make_matrix_structure(F);
                } catch (const StructureError& e) {
                    throw SpecError(e.what(), line_no);
                }
            } else {
                throw SpecError("ambient: expected 'signature' or 'matrix'", line_no);
            }
            have_ambient = true;
        } else if (kw == "chart") {
            spec.chart = split_ws(rest);
            if (spec.chart.empty()) throw SpecError("chart: no coordinates", line_no);
            std::set<std::string> uniq(spec.chart.begin(), spec.chart.end());
            if (uniq.size() != spec.chart.size())
                throw SpecError("chart: duplicate coordinate name", line_no);
            spec.domain.assign(spec.chart.size(),
                               std::array<double, 2>{std::nan(""), std::nan("")});
            have_chart = true;
        } else if (kw == "domain") {
            if (!have_chart) throw SpecError("domain before chart", line_no);
            for (const std::string& part : split_top_level(rest, ';')) {
                auto tokens = split_ws(part);
                if (tokens.size() != 3)
                    throw SpecError("domain: expected '<coord> <lo> <hi>'", line_no);
                auto it = std::find(spec.chart.begin(), spec.chart.end(), tokens[0]);
                if (it == spec.chart.end())
                    throw SpecError("domain: unknown coordinate '" + tokens[0] + "'", line_no);
                const auto idx = static_cast<std::size_t>(it - spec.chart.begin());
                const double lo = std::stod(tokens[1]), hi = std::stod(tokens[2]);
                if (!(lo < hi)) throw SpecError("domain: need lo < hi", line_no);
                spec.domain[idx] = {lo, hi};
            }
        } else if (kw == "map") {
            if (!have_chart || !have_ambient) throw SpecError("map before chart/ambient", line_no);
            for (const std::string& comp : split_top_level(rest, ','))
                spec.components.push_back(parse_line_expr(comp, spec.chart, line_no));
            if (static_cast<int>(spec.components.size()) != spec.ambient.n)
                throw SpecError("map: expected " + std::to_string(spec.ambient.n) +
                                    " components, got " + std::to_string(spec.components.size()),
                                line_no);
            have_map = true;
        } else if (kw == "dist") {
            if (!have_chart) throw SpecError("dist before chart", line_no);
            auto eq = rest.find('=');
            if (eq == std::string::npos) throw SpecError("dist: expected 'dist NAME = ...'", line_no);
            Distribution d;
            d.name = trim(rest.substr(0, eq));
            if (d.name.empty()) throw SpecError("dist: empty name", line_no);
            if (spec.find_distribution(d.name))
                throw SpecError("dist: duplicate distribution '" + d.name + "'", line_no);
            for (const std::string& f : split_top_level(rest.substr(eq + 1), ','))
                d.fields.push_back(parse_field(f, spec.chart, line_no));
            if (d.fields.empty()) throw SpecError("dist: no fields", line_no);
            spec.distributions.push_back(std::move(d));
        } else if (kw == "claim") {
            if (!have_chart) throw SpecError("claim before chart", line_no);
            std::istringstream cs(rest);
            std::string what;
            cs >> what;
            if (what == "slant") {
                std::string dist;
                cs >> dist;
                std::string expr_text;
                std::getline(cs, expr_text);
                expr_text = trim(expr_text);
                if (!spec.find_distribution(dist))
                    throw SpecError("claim slant: unknown distribution '" + dist + "'", line_no);
                if (spec.find_slant_claim(dist))
                    throw SpecError("claim slant: duplicate claim for '" + dist + "'", line_no);
                spec.slant_claims.push_back(
                    {dist, parse_line_expr(expr_text, spec.chart, line_no), expr_text});
            } else if (what == "warped") {
                std::string kw_base, base, kw_fiber, fiber, kw_f;
                cs >> kw_base >> base >> kw_fiber >> fiber >> kw_f;
                if (kw_base != "base" || kw_fiber != "fiber" || kw_f != "f")
                    throw SpecError("claim warped: expected 'base <D> fiber <D> f <expr>'", line_no);
                std::string expr_text;
                std::getline(cs, expr_text);
                expr_text = trim(expr_text);
                if (!spec.find_distribution(base))
                    throw SpecError("claim warped: unknown distribution '" + base + "'", line_no);
                if (!spec.find_distribution(fiber))
                    throw SpecError("claim warped: unknown distribution '" + fiber + "'", line_no);
                if (base == fiber) throw SpecError("claim warped: base == fiber", line_no);
                if (spec.warped_claim) throw SpecError("claim warped: duplicate claim", line_no);
                spec.warped_claim =
                    WarpedClaim{base, fiber, parse_line_expr(expr_text, spec.chart, line_no),
                                expr_text};
            } else if (what == "mu") {
                std::string expr_text;
                std::getline(cs, expr_text);
                expr_text = trim(expr_text);
                if (spec.mu_claim) throw SpecError("claim mu: duplicate claim", line_no);
                spec.mu_claim = parse_line_expr(expr_text, spec.chart, line_no);
                spec.mu_claim_text = expr_text;
            } else {
                throw SpecError("claim: unknown kind '" + what + "'", line_no);
            }
        } else {
            throw SpecError("unknown directive '" + kw + "'", line_no);
        }
    }

    if (!have_ambient) throw SpecError("missing 'ambient' line");
    if (!have_chart) throw SpecError("missing 'chart' line");
    if (!have_map) throw SpecError("missing 'map' line");
    for (std::size_t i = 0; i < spec.chart.size(); ++i) {
        if (std::isnan(spec.domain[i][0]))
            throw SpecError("missing domain for coordinate '" + spec.chart[i] + "'");
    }
    if (static_cast<int>(spec.chart.size()) > spec.ambient.n)
        throw SpecError("chart dimension exceeds ambient dimension");

    // Def 3.1(a): with any claim present, declared ranks must fill the chart.
    const bool any_claim = !spec.slant_claims.empty() || spec.warped_claim || spec.mu_claim;
    if (any_claim) {
        int total = 0;
        for (const auto& d : spec.distributions) total += d.rank();
        if (total != spec.chart_dim())
            throw SpecError("distribution ranks sum to " + std::to_string(total) +
                            " but the chart has dimension " + std::to_string(spec.chart_dim()) +
                            " (claims require TM = D1 (+) D2)");
    }
    return spec;
}

ImmersionSpec load_spec_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError("cannot open spec file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_spec(buf.str());
}

// ---------------------------------------------------------------------------
// Frames and derivatives
// ---------------------------------------------------------------------------

Eigen::MatrixXd Frame::gram_solve(const Eigen::MatrixXd& rhs) const {
    return gram.ldlt().solve(rhs);
}

double Frame::inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    return x.dot(gram * y);
}

double Frame::norm(const Eigen::VectorXd& x) const { return std::sqrt(std::max(0.0, inner(x, x))); }

Frame frame_at(const ImmersionSpec& spec, const Eigen::VectorXd& p) {
    const int n = spec.ambient_dim();
    const int k = spec.chart_dim();
    Frame fr;
    fr.point = p;
    fr.jacobian.resize(n, k);
    for (int a = 0; a < n; ++a) {
        const Jet2 j = spec.components[static_cast<std::size_t>(a)].eval_jet2(p);
        fr.jacobian.row(a) = j.grad.transpose();
    }
    fr.gram = fr.jacobian.transpose() * fr.jacobian;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fr.gram);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    fr.gram_cond = (lmin > 0.0) ? lmax / lmin : std::numeric_limits<double>::infinity();
    if (!(lmin > 0.0) || fr.gram_cond > kGramCondLimit) {
        std::ostringstream os;
        os << "singular point (gram condition " << fr.gram_cond << ") at (";
        for (int i = 0; i < k; ++i) os << (i ? ", " : "") << p(i);
        os << ")";
        throw SingularPointError(os.str());
    }

    // Orthonormal completion of the column space: Householder QR of J leaves
    // the normal space in the trailing columns of Q. Deterministic in p.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(fr.jacobian);
    const Eigen::MatrixXd Q = qr.householderQ();
    fr.normal = Q.rightCols(n - k);
    return fr;
}

SecondDerivatives second_derivatives_at(const ImmersionSpec& spec, const Eigen::VectorXd& p) {
    const int n = spec.ambient_dim();
    const int k = spec.chart_dim();
    SecondDerivatives sd;
    sd.H.assign(static_cast<std::size_t>(k),
                std::vector<Eigen::VectorXd>(static_cast<std::size_t>(k)));
    std::vector<Eigen::MatrixXd> hess;
    hess.reserve(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a)
        hess.push_back(spec.components[static_cast<std::size_t>(a)].eval_jet2(p).hess);
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            Eigen::VectorXd v(n);
            for (int a = 0; a < n; ++a) v(a) = hess[static_cast<std::size_t>(a)](i, j);
            sd.H[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            sd.H[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
        }
    }
    return sd;
}

// ---------------------------------------------------------------------------
// Domain sampling
// ---------------------------------------------------------------------------

namespace {

double radical_inverse(std::uint64_t i, int base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
        i /= static_cast<std::uint64_t>(base);
    }
    return r;
}

constexpr int kHaltonBases[8] = {2, 3, 5, 7, 11, 13, 17, 19};

// A point survives if the frame is regular and every claimed expression is
// evaluable with finite derivatives there (e.g. acos away from +-1).
bool point_usable(const ImmersionSpec& spec, const Eigen::VectorXd& p) {
    try {
        (void)frame_at(spec, p);
        for (const auto& c : spec.slant_claims) (void)c.theta.eval_jet2(p);
        if (spec.warped_claim) {
            const Jet2 f = spec.warped_claim->f.eval_jet2(p);
            if (!(f.value > 0.0)) return false;  // ln f must exist
        }
        if (spec.mu_claim) (void)spec.mu_claim->eval_jet2(p);
        for (const auto& d : spec.distributions)
            for (const auto& fld : d.fields)
                for (const auto& e : fld.coeff) (void)e.eval_jet2(p);
    } catch (const SingularPointError&) {
        return false;
    } catch (const ExprError&) {
        return false;
    }
    return true;
}

}  // namespace

SampleSet sample_domain(const ImmersionSpec& spec, int count, std::uint64_t seed) {
    if (count < 1) throw SpecError("sample count must be >= 1");
    const int k = spec.chart_dim();
    if (k > 8) throw SpecError("charts beyond dimension 8 are not supported by the sampler");
    SampleSet out;
    out.requested = count;
    const int budget = 2 * count;
    for (int i = 0; i < budget && static_cast<int>(out.points.size()) < count; ++i) {
        const std::uint64_t idx = 1 + seed + static_cast<std::uint64_t>(i);
        Eigen::VectorXd p(k);
        for (int d = 0; d < k; ++d) {
            const double t = radical_inverse(idx, kHaltonBases[d]);
            p(d) = spec.domain[static_cast<std::size_t>(d)][0] +
                   t * (spec.domain[static_cast<std::size_t>(d)][1] -
                        spec.domain[static_cast<std::size_t>(d)][0]);
        }
        if (point_usable(spec, p))
            out.points.push_back(std::move(p));
        else
            ++out.dropped;
    }
    if (2 * static_cast<int>(out.points.size()) < count)
        throw SpecError("domain mostly singular: only " + std::to_string(out.points.size()) +
                        " of " + std::to_string(count) + " requested points are usable");
    return out;
}

}  // namespace bislant
