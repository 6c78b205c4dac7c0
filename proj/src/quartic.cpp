#include "siegel/quartic.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace siegel {

QuarticPoint::QuarticPoint(std::array<Cyclo, 6> coords) : x(std::move(coords)) {
    Cyclo sum = x[0];
    bool all_zero = x[0].is_zero();
    for (int i = 1; i < 6; ++i) {
        sum += x[std::size_t(i)];
        all_zero = all_zero && x[std::size_t(i)].is_zero();
    }
    if (all_zero) throw std::domain_error("quartic point: zero vector");
    if (!sum.is_zero()) throw std::domain_error("quartic point: coordinates must sum to zero");
}

QuarticPoint permute(const Perm6& s, const QuarticPoint& p) {
    std::array<Cyclo, 6> y;
    for (int i = 0; i < 6; ++i) y[std::size_t(i)] = p.x[std::size_t(s[std::size_t(i)])];
    return QuarticPoint(std::move(y));
}

bool on_quartic(const QuarticPoint& p) {
    auto f = p.field();
    Cyclo s2 = Cyclo::zero(f), s4 = Cyclo::zero(f);
    for (const auto& xi : p.x) {
        Cyclo q = xi * xi;
        s2 += q;
        s4 += q * q;
    }
    Cyclo four(f, 4);
    return (s2 * s2 - four * s4).is_zero();
}

bool in_singular_locus(const QuarticPoint& p) {
    static const int pairings[15][6] = {
        {0,1,2,3,4,5}, {0,1,2,4,3,5}, {0,1,2,5,3,4},
        {0,2,1,3,4,5}, {0,2,1,4,3,5}, {0,2,1,5,3,4},
        {0,3,1,2,4,5}, {0,3,1,4,2,5}, {0,3,1,5,2,4},
        {0,4,1,2,3,5}, {0,4,1,3,2,5}, {0,4,1,5,2,3},
        {0,5,1,2,3,4}, {0,5,1,3,2,4}, {0,5,1,4,2,3}};
    for (const auto& m : pairings) {
        bool ok = true;
        for (int k = 0; k < 6 && ok; k += 2)
            ok = (p.x[std::size_t(m[k])] - p.x[std::size_t(m[k + 1])]).is_zero();
        if (ok) return true;
    }
    return false;
}

namespace {

std::array<Cyclo, 6> gradient(const QuarticPoint& p) {
    auto f = p.field();
    Cyclo s2 = Cyclo::zero(f);
    for (const auto& xi : p.x) s2 += xi * xi;
    std::array<Cyclo, 6> g;
    Cyclo four(f, 4), sixteen(f, 16);
    for (int i = 0; i < 6; ++i) {
        const Cyclo& xi = p.x[std::size_t(i)];
        g[std::size_t(i)] = four * xi * s2 - sixteen * xi * xi * xi;
    }
    return g;
}

}  // namespace

bool is_smooth_point(const QuarticPoint& p) {
    // singular as a point of the quartic surface in {sum = 0} iff the
    // gradient is a multiple of (1,...,1)
    auto g = gradient(p);
    for (int i = 1; i < 6; ++i)
        if (!(g[std::size_t(i)] - g[0]).is_zero()) return true;
    return false;
}

std::vector<StabilizerElement> stabilizer(const QuarticPoint& p) {
    if (!on_quartic(p)) throw std::domain_error("stabilizer: point not on the quartic");
    std::vector<StabilizerElement> out;
    Perm6 s{0, 1, 2, 3, 4, 5};
    do {
        // lambda from the first nonzero coordinate, verified on all
        int pivot = -1;
        for (int i = 0; i < 6; ++i)
            if (!p.x[std::size_t(i)].is_zero()) { pivot = i; break; }
        Cyclo lambda = p.x[std::size_t(s[std::size_t(pivot)])] * p.x[std::size_t(pivot)].inverse();
        if (lambda.is_zero()) continue;
        bool ok = true;
        for (int i = 0; i < 6 && ok; ++i)
            ok = (p.x[std::size_t(s[std::size_t(i)])] - lambda * p.x[std::size_t(i)]).is_zero();
        if (ok) out.push_back(StabilizerElement{s, lambda});
    } while (std::next_permutation(s.begin(), s.end()));
    return out;
}

namespace {

// exact null-space basis of a k x 6 matrix over the field
std::vector<std::array<Cyclo, 6>> null_space(std::vector<std::array<Cyclo, 6>> rows,
                                             const std::shared_ptr<const CycloField>& f) {
    std::size_t nr = rows.size();
    std::vector<int> pivot_col(nr, -1);
    std::size_t r = 0;
    for (int c = 0; c < 6 && r < nr; ++c) {
        std::size_t sel = nr;
        for (std::size_t i = r; i < nr; ++i)
            if (!rows[i][std::size_t(c)].is_zero()) { sel = i; break; }
        if (sel == nr) continue;
        std::swap(rows[r], rows[sel]);
        Cyclo inv = rows[r][std::size_t(c)].inverse();
        for (int j = 0; j < 6; ++j) rows[r][std::size_t(j)] = rows[r][std::size_t(j)] * inv;
        for (std::size_t i = 0; i < nr; ++i) {
            if (i == r || rows[i][std::size_t(c)].is_zero()) continue;
            Cyclo coef = rows[i][std::size_t(c)];
            for (int j = 0; j < 6; ++j)
                rows[i][std::size_t(j)] = rows[i][std::size_t(j)] - coef * rows[r][std::size_t(j)];
        }
        pivot_col[r] = c;
        ++r;
    }
    std::vector<bool> is_pivot(6, false);
    for (std::size_t i = 0; i < r; ++i) is_pivot[std::size_t(pivot_col[i])] = true;
    std::vector<std::array<Cyclo, 6>> basis;
    for (int c = 0; c < 6; ++c) {
        if (is_pivot[std::size_t(c)]) continue;
        std::array<Cyclo, 6> v;
        for (int j = 0; j < 6; ++j) v[std::size_t(j)] = Cyclo::zero(f);
        v[std::size_t(c)] = Cyclo::one(f);
        for (std::size_t i = 0; i < r; ++i)
            v[std::size_t(pivot_col[i])] = -rows[i][std::size_t(c)];
        basis.push_back(std::move(v));
    }
    return basis;
}

// solve a square system A y = b over the field by elimination
std::vector<Cyclo> solve_square(std::vector<std::vector<Cyclo>> a, std::vector<Cyclo> b) {
    std::size_t n = a.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t sel = n;
        for (std::size_t i = c; i < n; ++i)
            if (!a[i][c].is_zero()) { sel = i; break; }
        if (sel == n) throw std::domain_error("solve_square: singular system");
        std::swap(a[c], a[sel]);
        std::swap(b[c], b[sel]);
        Cyclo inv = a[c][c].inverse();
        for (std::size_t j = 0; j < n; ++j) a[c][j] *= inv;
        b[c] *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c].is_zero()) continue;
            Cyclo coef = a[i][c];
            for (std::size_t j = 0; j < n; ++j) a[i][j] -= coef * a[c][j];
            b[i] -= coef * b[c];
        }
    }
    return b;
}

}  // namespace

TangentAction tangent_action(const QuarticPoint& p, const StabilizerElement& s) {
    if (!is_smooth_point(p))
        throw std::domain_error("tangent action: the point is singular on the quartic");
    auto f = p.field();
    std::array<Cyclo, 6> ones, grad = gradient(p);
    for (int i = 0; i < 6; ++i) ones[std::size_t(i)] = Cyclo::one(f);
    auto basis = null_space({ones, grad}, f);
    if (basis.size() != 4) throw std::logic_error("tangent action: expected a 4-dimensional space");
    Cyclo li = s.lambda.inverse();
    // images in terms of the basis
    TangentAction out;
    out.basis = basis;
    std::vector<std::vector<Cyclo>> at(6, std::vector<Cyclo>());
    // coordinates: solve (basis columns) * y = image for each basis vector
    std::vector<std::vector<Cyclo>> sys;  // 6 x 4, overdetermined; use 4 independent rows
    // find 4 rows of the 6x4 basis matrix with full rank by elimination on a copy
    std::vector<std::vector<Cyclo>> cols(4, std::vector<Cyclo>(6, Cyclo::zero(f)));
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 6; ++i) cols[std::size_t(j)][std::size_t(i)] = basis[std::size_t(j)][std::size_t(i)];
    // choose row subset greedily
    std::vector<int> rows_used;
    {
        std::vector<std::vector<Cyclo>> work;  // accumulated chosen rows
        for (int i = 0; i < 6 && rows_used.size() < 4; ++i) {
            std::vector<std::vector<Cyclo>> trial = work;
            std::vector<Cyclo> row(4, Cyclo::zero(f));
            for (int j = 0; j < 4; ++j) row[std::size_t(j)] = cols[std::size_t(j)][std::size_t(i)];
            trial.push_back(row);
            // rank check by elimination
            auto m = trial;
            std::size_t rank = 0;
            for (std::size_t c = 0; c < 4 && rank < m.size(); ++c) {
                std::size_t sel = m.size();
                for (std::size_t r2 = rank; r2 < m.size(); ++r2)
                    if (!m[r2][c].is_zero()) { sel = r2; break; }
                if (sel == m.size()) continue;
                std::swap(m[rank], m[sel]);
                Cyclo inv = m[rank][c].inverse();
                for (std::size_t j = 0; j < 4; ++j) m[rank][j] *= inv;
                for (std::size_t r2 = 0; r2 < m.size(); ++r2) {
                    if (r2 == rank || m[r2][c].is_zero()) continue;
                    Cyclo coef = m[r2][c];
                    for (std::size_t j = 0; j < 4; ++j) m[r2][j] -= coef * m[rank][j];
                }
                ++rank;
            }
            if (rank == trial.size()) {
                work = std::move(trial);
                rows_used.push_back(i);
            }
        }
        if (rows_used.size() != 4) throw std::logic_error("tangent action: basis rows degenerate");
    }
    out.matrix.assign(4, std::vector<Cyclo>(4, Cyclo::zero(f)));
    for (int j = 0; j < 4; ++j) {
        // image of basis[j]: lambda^-1 * sigma(basis[j])
        std::array<Cyclo, 6> img;
        for (int i = 0; i < 6; ++i)
            img[std::size_t(i)] = li * basis[std::size_t(j)][std::size_t(s.sigma[std::size_t(i)])];
        std::vector<std::vector<Cyclo>> a(4, std::vector<Cyclo>(4, Cyclo::zero(f)));
        std::vector<Cyclo> b(4, Cyclo::zero(f));
        for (int r2 = 0; r2 < 4; ++r2) {
            for (int k = 0; k < 4; ++k)
                a[std::size_t(r2)][std::size_t(k)] =
                    basis[std::size_t(k)][std::size_t(rows_used[std::size_t(r2)])];
            b[std::size_t(r2)] = img[std::size_t(rows_used[std::size_t(r2)])];
        }
        auto y = solve_square(a, b);
        for (int k = 0; k < 4; ++k) out.matrix[std::size_t(k)][std::size_t(j)] = y[std::size_t(k)];
    }
    return out;
}

Cyclo tangent_action_determinant(const QuarticPoint& p, const StabilizerElement& s) {
    auto ta = tangent_action(p, s);
    // 4x4 determinant by elimination; the Euler direction carries eigenvalue
    // 1, so this equals the determinant on the 3-dimensional tangent space
    auto m = ta.matrix;
    auto f = p.field();
    Cyclo det = Cyclo::one(f);
    for (std::size_t c = 0; c < 4; ++c) {
        std::size_t sel = 4;
        for (std::size_t i = c; i < 4; ++i)
            if (!m[i][c].is_zero()) { sel = i; break; }
        if (sel == 4) return Cyclo::zero(f);
        if (sel != c) {
            std::swap(m[c], m[sel]);
            det = -det;
        }
        det *= m[c][c];
        Cyclo inv = m[c][c].inverse();
        for (std::size_t i = c + 1; i < 4; ++i) {
            if (m[i][c].is_zero()) continue;
            Cyclo coef = m[i][c] * inv;
            for (std::size_t j = c; j < 4; ++j) m[i][j] -= coef * m[c][j];
        }
    }
    return det;
}

bool reid_tai(const std::vector<u32>& weights, u32 r) {
    for (const auto& age : reid_tai_ages(weights, r))
        if (age < 1) return false;
    return true;
}

std::vector<Rational> reid_tai_ages(const std::vector<u32>& weights, u32 r) {
    if (r == 0) throw std::invalid_argument("reid_tai: zero order");
    std::vector<Rational> ages;
    for (u32 m = 1; m < r; ++m) {
        bool trivial = true;
        u64 num = 0;
        for (u32 a : weights) {
            u32 w = u32((u64(m) * a) % r);
            if (w != 0) trivial = false;
            num += w;
        }
        if (trivial) continue;  // this power acts trivially
        ages.push_back(Rational(num, r));
    }
    return ages;
}

const char* outcome_name(FixedLocusOutcome o) {
    switch (o) {
        case FixedLocusOutcome::NoFixedPoints: return "no-fixed-points";
        case FixedLocusOutcome::NotOnQuartic: return "not-on-quartic";
        case FixedLocusOutcome::SingularLocus: return "singular-locus";
        case FixedLocusOutcome::InEDivisorImage: return "in-E-divisor-image";
        case FixedLocusOutcome::DivisorXiEqXj: return "divisor-xi-eq-xj";
        case FixedLocusOutcome::ThetaOrbit: return "theta-orbit";
    }
    return "?";
}

namespace {

// tiny dense polynomials in <= 4 parameters with cyclotomic coefficients,
// exponents bounded by 4 per variable
struct Poly3 {
    std::shared_ptr<const CycloField> f;
    std::map<std::array<int, 4>, Cyclo> terms;

    explicit Poly3(std::shared_ptr<const CycloField> field) : f(std::move(field)) {}
    static Poly3 constant(std::shared_ptr<const CycloField> f, Cyclo c) {
        Poly3 p(f);
        if (!c.is_zero()) p.terms[{0, 0, 0, 0}] = std::move(c);
        return p;
    }
    static Poly3 variable(std::shared_ptr<const CycloField> f, int i) {
        Poly3 p(f);
        std::array<int, 4> e{0, 0, 0, 0};
        e.at(std::size_t(i)) = 1;
        p.terms[e] = Cyclo::one(f);
        return p;
    }
    void add_term(std::array<int, 4> e, const Cyclo& c) {
        auto it = terms.find(e);
        if (it == terms.end()) {
            if (!c.is_zero()) terms[e] = c;
        } else {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }
    Poly3 operator+(const Poly3& o) const {
        Poly3 r = *this;
        for (const auto& [e, c] : o.terms) r.add_term(e, c);
        return r;
    }
    Poly3 operator-(const Poly3& o) const {
        Poly3 r = *this;
        for (const auto& [e, c] : o.terms) r.add_term(e, -c);
        return r;
    }
    Poly3 operator*(const Poly3& o) const {
        Poly3 r(f);
        for (const auto& [e1, c1] : terms)
            for (const auto& [e2, c2] : o.terms)
                r.add_term({e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]}, c1 * c2);
        return r;
    }
    bool is_zero() const { return terms.empty(); }
};

Perm6 parse_cycles(const std::string& type) {
    Perm6 s{0, 1, 2, 3, 4, 5};
    std::vector<int> cycle;
    std::string num;
    auto flush_num = [&] {
        if (!num.empty()) {
            cycle.push_back(std::stoi(num) - 1);
            num.clear();
        }
    };
    auto flush_cycle = [&] {
        flush_num();
        for (std::size_t i = 0; i < cycle.size(); ++i)
            s[std::size_t(cycle[i])] = cycle[(i + 1) % cycle.size()];
        cycle.clear();
    };
    for (char ch : type) {
        if (ch == '(') cycle.clear();
        else if (ch == ',') flush_num();
        else if (ch == ')') flush_cycle();
        else if (ch >= '0' && ch <= '9') num.push_back(ch);
    }
    // the convention here: sigma sends coordinate slot i to slot s[i]; for
    // fixed-point analysis we need x_{sigma^-1(i)} = lambda x_i, matching
    // permute(); invert to the "position receives" form
    Perm6 inv;
    for (int i = 0; i < 6; ++i) inv[std::size_t(s[std::size_t(i)])] = i;
    return inv;
}

int perm_order(const Perm6& s) {
    int order = 1;
    Perm6 cur = s;
    Perm6 id{0, 1, 2, 3, 4, 5};
    while (!(cur == id)) {
        Perm6 next;
        for (int i = 0; i < 6; ++i) next[std::size_t(i)] = s[std::size_t(cur[std::size_t(i)])];
        cur = next;
        ++order;
    }
    return order;
}

// eigenspace of sigma for lambda inside {sum x = 0}
std::vector<std::array<Cyclo, 6>> eigenspace(const Perm6& sigma, const Cyclo& lambda) {
    auto f = lambda.field();
    std::vector<std::array<Cyclo, 6>> rows;
    // sigma(x) = lambda x reads x[sigma[i]] - lambda x[i] = 0 rowwise
    for (int i = 0; i < 6; ++i) {
        std::array<Cyclo, 6> row;
        for (int j = 0; j < 6; ++j) row[std::size_t(j)] = Cyclo::zero(f);
        row[std::size_t(sigma[std::size_t(i)])] += Cyclo::one(f);
        row[std::size_t(i)] -= lambda;
        rows.push_back(std::move(row));
    }
    std::array<Cyclo, 6> ones;
    for (int i = 0; i < 6; ++i) ones[std::size_t(i)] = Cyclo::one(f);
    rows.push_back(std::move(ones));
    return null_space(std::move(rows), f);
}

Poly3 restricted_quartic(const std::vector<std::array<Cyclo, 6>>& basis,
                         const std::shared_ptr<const CycloField>& f) {
    // substitute x = sum_k t_k basis[k] into (sum x^2)^2 - 4 sum x^4
    std::array<Poly3, 6> xs{Poly3(f), Poly3(f), Poly3(f), Poly3(f), Poly3(f), Poly3(f)};
    for (int i = 0; i < 6; ++i) {
        Poly3 acc(f);
        for (std::size_t k = 0; k < basis.size(); ++k)
            acc = acc + Poly3::variable(f, int(k)) * Poly3::constant(f, basis[k][std::size_t(i)]);
        xs[std::size_t(i)] = acc;
    }
    Poly3 s2(f), s4(f);
    for (int i = 0; i < 6; ++i) {
        Poly3 sq = xs[std::size_t(i)] * xs[std::size_t(i)];
        s2 = s2 + sq;
        s4 = s4 + sq * sq;
    }
    return s2 * s2 - Poly3::constant(f, Cyclo(f, 4)) * s4;
}

bool eigenspace_in_hyperplane(const std::vector<std::array<Cyclo, 6>>& basis, int i, int j) {
    for (const auto& b : basis)
        if (!(b[std::size_t(i)] - b[std::size_t(j)]).is_zero()) return false;
    return true;
}

bool in_theta_orbit(const QuarticPoint& p) {
    auto f = p.field();
    Cyclo theta = Cyclo::root_of_order(f, 5);
    std::array<Cyclo, 6> model{Cyclo::zero(f), theta, theta.pow(2), theta.pow(3), theta.pow(4),
                               Cyclo::one(f)};
    Perm6 s{0, 1, 2, 3, 4, 5};
    do {
        // projective match: p permuted equals model up to one scalar
        int pivot = -1;
        for (int i = 0; i < 6 && pivot < 0; ++i)
            if (!model[std::size_t(i)].is_zero() && !p.x[std::size_t(s[std::size_t(i)])].is_zero())
                pivot = i;
        if (pivot < 0) continue;
        Cyclo scale = p.x[std::size_t(s[std::size_t(pivot)])] * model[std::size_t(pivot)].inverse();
        bool ok = true;
        for (int i = 0; i < 6 && ok; ++i)
            ok = (p.x[std::size_t(s[std::size_t(i)])] - scale * model[std::size_t(i)]).is_zero();
        if (ok) return true;
    } while (std::next_permutation(s.begin(), s.end()));
    return false;
}

}  // namespace

CaseReport classify_permutation_fixed_locus(const std::string& sigma_type) {
    static const std::vector<std::string> known{"(1,2)", "(1,2)(3,4)", "(1,2)(3,4)(5,6)",
                                                "(1,2,3)", "(1,2,3)(4,5,6)", "(1,2,3,4,5)"};
    if (std::find(known.begin(), known.end(), sigma_type) == known.end())
        throw std::invalid_argument("classify: not one of the six listed representatives");
    auto f = CycloField::get(60);  // contains all needed proportionality factors
    Perm6 sigma = parse_cycles(sigma_type);
    int order = perm_order(sigma);

    CaseReport report;
    report.sigma_type = sigma_type;
    for (int k = 0; k < order; ++k) {
        Cyclo lambda = Cyclo::root_of_order(f, u32(order), k);
        std::string lname = k == 0 ? "1" : "zeta" + std::to_string(order) +
                                              (k > 1 ? "^" + std::to_string(k) : "");
        if (order == 2 && k == 1) lname = "-1";
        auto basis = eigenspace(sigma, lambda);
        CaseBranch branch;
        branch.lambda = lname;
        if (basis.empty()) {
            branch.outcome = FixedLocusOutcome::NoFixedPoints;
            report.branches.push_back(std::move(branch));
            continue;
        }
        if (basis.size() == 1) {
            QuarticPoint pt(basis[0]);
            bool triple_zero = false;
            for (int i = 0; i < 6 && !triple_zero; ++i)
                for (int j = i + 1; j < 6 && !triple_zero; ++j)
                    for (int l = j + 1; l < 6 && !triple_zero; ++l)
                        triple_zero = (pt.x[std::size_t(i)] + pt.x[std::size_t(j)] +
                                       pt.x[std::size_t(l)]).is_zero();
            if (!on_quartic(pt)) {
                branch.outcome = FixedLocusOutcome::NotOnQuartic;
                std::ostringstream os;
                os << "candidate point (";
                for (int i = 0; i < 6; ++i) os << (i ? ":" : "") << pt.x[std::size_t(i)].str();
                os << ") misses the quartic";
                branch.detail = os.str();
            } else if (in_theta_orbit(pt)) {
                branch.outcome = FixedLocusOutcome::ThetaOrbit;
                branch.detail = "isolated point in the orbit of (0:t:t^2:t^3:t^4:1), t^5 = 1";
            } else if (in_singular_locus(pt)) {
                branch.outcome = FixedLocusOutcome::SingularLocus;
                branch.detail = "isolated point on a singular double line";
            } else if (triple_zero) {
                branch.outcome = FixedLocusOutcome::InEDivisorImage;
                branch.detail = "isolated point with a vanishing coordinate triple sum";
            } else {
                throw std::logic_error("classify: unexpected isolated fixed point");
            }
            report.branches.push_back(std::move(branch));
            continue;
        }
        // positive-dimensional eigenspace
        Poly3 q = restricted_quartic(basis, f);
        if (q.is_zero()) {
            // the whole eigenspace lies on the quartic; in the listed cases
            // this is one of the singular double lines
            bool singular_pattern = false;
            // check x_i = x_j for a full pairing via the basis
            static const int pairings[15][6] = {
                {0,1,2,3,4,5}, {0,1,2,4,3,5}, {0,1,2,5,3,4},
                {0,2,1,3,4,5}, {0,2,1,4,3,5}, {0,2,1,5,3,4},
                {0,3,1,2,4,5}, {0,3,1,4,2,5}, {0,3,1,5,2,4},
                {0,4,1,2,3,5}, {0,4,1,3,2,5}, {0,4,1,5,2,3},
                {0,5,1,2,3,4}, {0,5,1,3,2,4}, {0,5,1,4,2,3}};
            for (const auto& m : pairings) {
                bool all = true;
                for (int t = 0; t < 6 && all; t += 2)
                    all = eigenspace_in_hyperplane(basis, m[t], m[t + 1]);
                if (all) { singular_pattern = true; break; }
            }
            if (singular_pattern) {
                branch.outcome = FixedLocusOutcome::SingularLocus;
                branch.detail = "the eigenspace is one of the fifteen singular double lines";
                report.branches.push_back(std::move(branch));
                continue;
            }
            // flat but not singular: the conjugate three-cycle eigenspaces lie
            // on the quartic with vanishing coordinate triple sums
            bool flat_triple = false;
            for (int i = 0; i < 6 && !flat_triple; ++i)
                for (int j = i + 1; j < 6 && !flat_triple; ++j)
                    for (int l = j + 1; l < 6 && !flat_triple; ++l) {
                        bool all = true;
                        for (const auto& b : basis)
                            if (!(b[std::size_t(i)] + b[std::size_t(j)] + b[std::size_t(l)])
                                     .is_zero()) {
                                all = false;
                                break;
                            }
                        if (all) flat_triple = true;
                    }
            if (!flat_triple)
                throw std::logic_error("classify: quartic-flat eigenspace unrecognized");
            branch.outcome = FixedLocusOutcome::InEDivisorImage;
            branch.detail = "the eigenspace lies on the quartic with a vanishing triple sum";
            report.branches.push_back(std::move(branch));
            continue;
        }
        if (basis.size() == 2) {
            // a lambda = -1 double-transposition branch: the restricted
            // quartic collapses to -4 (s^2 - t^2)^2 and the zero locus is
            // singular
            Poly3 sv = Poly3::variable(f, 0), tv = Poly3::variable(f, 1);
            Poly3 diff = sv * sv - tv * tv;
            if ((q - Poly3::constant(f, Cyclo(f, -4)) * diff * diff).is_zero()) {
                for (int sign : {1, -1}) {
                    std::array<Cyclo, 6> w;
                    for (int i = 0; i < 6; ++i)
                        w[std::size_t(i)] =
                            basis[0][std::size_t(i)] + Cyclo(f, sign) * basis[1][std::size_t(i)];
                    QuarticPoint wp(w);
                    if (!on_quartic(wp) || !in_singular_locus(wp))
                        throw std::logic_error("classify: witness not in the singular locus");
                }
                branch.outcome = FixedLocusOutcome::SingularLocus;
                branch.detail = "the restricted quartic is -4(s^2-t^2)^2; s = ±t are singular points";
                report.branches.push_back(std::move(branch));
                continue;
            }
        }
        // inside a divisor x_i = x_j?
        bool in_divisor = false;
        for (int i = 0; i < 6 && !in_divisor; ++i)
            for (int j = i + 1; j < 6 && !in_divisor; ++j)
                if (eigenspace_in_hyperplane(basis, i, j)) {
                    in_divisor = true;
                    branch.outcome = FixedLocusOutcome::DivisorXiEqXj;
                    branch.detail = "fixed locus inside the divisor x" + std::to_string(i + 1) +
                                    " = x" + std::to_string(j + 1);
                }
        if (in_divisor) {
            report.branches.push_back(std::move(branch));
            continue;
        }
        // E-image cases: a triple-sum of coordinates vanishes on the
        // eigenspace, or the restricted quartic is the printed product of the
        // four triple-sum forms
        bool triple_sum = false;
        for (int i = 0; i < 6 && !triple_sum; ++i)
            for (int j = i + 1; j < 6 && !triple_sum; ++j)
                for (int l = j + 1; l < 6 && !triple_sum; ++l) {
                    bool all = true;
                    for (const auto& b : basis)
                        if (!(b[std::size_t(i)] + b[std::size_t(j)] + b[std::size_t(l)]).is_zero()) {
                            all = false;
                            break;
                        }
                    if (all) {
                        triple_sum = true;
                        branch.detail = "x" + std::to_string(i + 1) + "+x" + std::to_string(j + 1) +
                                        "+x" + std::to_string(l + 1) + " vanishes on the eigenspace";
                    }
                }
        if (triple_sum) {
            branch.outcome = FixedLocusOutcome::InEDivisorImage;
            report.branches.push_back(std::move(branch));
            continue;
        }
        if (basis.size() == 3) {
            // type (1,2)(3,4)(5,6), lambda = -1: verify the printed
            // factorization 4 (s+t+u)(s+t-u)(s-t+u)(-s+t+u) exactly
            Poly3 s = Poly3::variable(f, 0), t = Poly3::variable(f, 1), u = Poly3::variable(f, 2);
            Poly3 prod = (s + t + u) * (s + t - u) * (s - t + u) *
                         (Poly3::constant(f, Cyclo(f, -1)) * s + t + u);
            if (!(q - Poly3::constant(f, Cyclo(f, 4)) * prod).is_zero())
                throw std::logic_error("classify: expected the four-plane factorization");
            branch.outcome = FixedLocusOutcome::InEDivisorImage;
            branch.detail = "the restricted quartic is 4(s+t+u)(s+t-u)(s-t+u)(-s+t+u)";
            report.branches.push_back(std::move(branch));
            continue;
        }
        throw std::logic_error("classify: unhandled eigenspace shape");
    }
    return report;
}

StabIIReport stab_ii_relations() {
    // exact integer matrices of the three generators
    auto mat = [](std::array<i64, 16> e) { return e; };
    auto mul = [](const std::array<i64, 16>& a, const std::array<i64, 16>& b) {
        std::array<i64, 16> c{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                i64 s = 0;
                for (int k = 0; k < 4; ++k) s += a[std::size_t(i * 4 + k)] * b[std::size_t(k * 4 + j)];
                c[std::size_t(i * 4 + j)] = s;
            }
        return c;
    };
    auto neg = [](std::array<i64, 16> a) {
        for (auto& x : a) x = -x;
        return a;
    };
    auto eq_pm = [&](const std::array<i64, 16>& a, const std::array<i64, 16>& b) {
        return a == b || a == neg(b);
    };
    std::array<i64, 16> id{1,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1};
    auto phi = mat({0,1,0,0, 1,0,0,0, 0,0,0,1, 0,0,1,0});
    auto al = mat({1,0,0,0, 0,0,0,1, 0,0,1,0, 0,-1,0,0});
    auto be = mat({0,0,1,0, 0,1,0,0, -1,0,0,0, 0,0,0,1});
    StabIIReport rep;
    rep.relations_hold = eq_pm(mul(al, be), mul(be, al)) && eq_pm(mul(al, al), mul(be, be)) &&
                         eq_pm(mul(phi, al), mul(be, phi)) && eq_pm(mul(phi, phi), id) &&
                         eq_pm(mul(mul(al, al), mul(al, al)), id) &&
                         eq_pm(mul(mul(be, be), mul(be, be)), id);
    rep.non_abelian = !eq_pm(mul(phi, al), mul(al, phi));
    // closure modulo ±1
    auto key = [&](std::array<i64, 16> a) { return std::min(a, neg(a)); };
    std::vector<std::array<i64, 16>> elems{id};
    std::map<std::array<i64, 16>, bool> seen{{key(id), true}};
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (const auto& g : {phi, al, be}) {
            auto x = mul(elems[i], g);
            auto k = key(x);
            if (seen.count(k)) continue;
            seen[k] = true;
            elems.push_back(x);
        }
    rep.group_order_mod_pm = elems.size();
    return rep;
}

// ---- integer symplectic helpers ----

ZMat4 zmat_identity() {
    ZMat4 m{};
    for (int i = 0; i < 4; ++i) m[std::size_t(i * 5)] = 1;
    return m;
}

ZMat4 zmat_mul(const ZMat4& a, const ZMat4& b) {
    ZMat4 c{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            BigInt s = 0;
            for (int k = 0; k < 4; ++k) s += a[std::size_t(i * 4 + k)] * b[std::size_t(k * 4 + j)];
            c[std::size_t(i * 4 + j)] = s;
        }
    return c;
}

ZMat4 zmat_neg(const ZMat4& a) {
    ZMat4 c = a;
    for (auto& x : c) x = -x;
    return c;
}

ZMat4 zmat_symplectic_inverse(const ZMat4& m) {
    // -J m^t J for symplectic m
    ZMat4 mt{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) mt[std::size_t(i * 4 + j)] = m[std::size_t(j * 4 + i)];
    ZMat4 J{0,0,1,0, 0,0,0,1, -1,0,0,0, 0,-1,0,0};
    ZMat4 r = zmat_mul(J, zmat_mul(mt, J));
    for (auto& x : r) x = -x;
    if (zmat_mul(m, r) != zmat_identity())
        throw std::domain_error("zmat_symplectic_inverse: not symplectic");
    return r;
}

BigInt zskew(const ZVec4& u, const ZVec4& v) {
    return u[0] * v[2] + u[1] * v[3] - u[2] * v[0] - u[3] * v[1];
}

bool zmat_is_symplectic(const ZMat4& m) {
    // columns as vectors; Gram must be the standard form
    auto col = [&](int j) {
        return ZVec4{m[std::size_t(j)], m[std::size_t(4 + j)], m[std::size_t(8 + j)],
                     m[std::size_t(12 + j)]};
    };
    const int J[4][4] = {{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (zskew(col(i), col(j)) != J[i][j]) return false;
    return true;
}

ZMat4 z_transvection(const ZVec4& v, const BigInt& alpha) {
    ZMat4 m = zmat_identity();
    for (int j = 0; j < 4; ++j) {
        ZVec4 ej{};
        ej[std::size_t(j)] = 1;
        BigInt coef = alpha * zskew(v, ej);
        for (int i = 0; i < 4; ++i) m[std::size_t(i * 4 + j)] += coef * v[std::size_t(i)];
    }
    return m;
}

namespace {

BigInt zegcd(const BigInt& a, const BigInt& b, BigInt& x, BigInt& y) {
    if (b == 0) {
        x = a >= 0 ? 1 : -1;
        y = 0;
        return boost::multiprecision::abs(a);
    }
    BigInt x1, y1;
    BigInt g = zegcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

}  // namespace

InvolutionNormalForm involution_normal_form(const ZMat4& m) {
    if (!zmat_is_symplectic(m)) throw std::domain_error("normal form: matrix not symplectic");
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            BigInt want = (i == j) ? 1 : 0;
            if ((m[std::size_t(i * 4 + j)] - want) % 2 != 0)
                throw std::domain_error("normal form: matrix not in the level-2 group");
        }
    ZMat4 sq = zmat_mul(m, m);
    if (sq != zmat_identity()) throw std::domain_error("normal form: matrix is not an involution");
    if (m == zmat_identity() || m == zmat_neg(zmat_identity()))
        throw std::domain_error("normal form: ±identity excluded");

    auto a = [&](int i, int j) { return m[std::size_t(i * 4 + j)]; };
    ZMat4 phi0{1,0,0,0, 0,-1,0,0, 0,0,1,0, 0,0,0,-1};
    InvolutionNormalForm out;
    if (m == phi0 || m == zmat_neg(phi0)) {
        for (int i = 0; i < 4; ++i) {
            out.e[std::size_t(i)] = ZVec4{};
            out.e[std::size_t(i)][std::size_t(i)] = 1;
        }
        out.conjugator = zmat_identity();
        return out;
    }
    // the involution shape: A = [[a1,a2],[a3,-a1]], B = [[0,b],[-b,0]],
    // C = [[0,c],[-c,0]], D = A^t (the a1 + a4 = 0 form)
    BigInt a1 = a(0, 0), a2 = a(0, 1), a3 = a(1, 0), b = a(0, 3), c = a(2, 1);
    ZMat4 shape{a1, a2, 0, b, a3, -a1, -b, 0, 0, c, a1, a3, -c, 0, a2, -a1};
    if (m != shape) throw std::domain_error("normal form: involution not of the derived shape");

    auto halves = [&](const ZVec4& v, const BigInt& den) {
        ZVec4 r;
        for (int i = 0; i < 4; ++i) {
            if (v[std::size_t(i)] % den != 0) throw std::logic_error("normal form: non-integral entry");
            r[std::size_t(i)] = v[std::size_t(i)] / den;
        }
        return r;
    };
    // construction of the +1 eigenvectors from the Bezout data
    auto plus_pair = [&](BigInt a1v, BigInt a2v, BigInt a3v, BigInt bv, BigInt cv)
        -> std::pair<ZVec4, ZVec4> {
        BigInt h_b = bv / 2, h_a3 = a3v / 2, h_a1m = (a1v - 1) / 2;
        BigInt g1, u, v;
        g1 = zegcd(h_b, h_a1m, u, v);
        BigInt d, s, t;
        d = zegcd(g1, -h_a3, s, t);
        if (d == 0) throw std::domain_error("normal form: degenerate gcd case");
        BigInt alpha = s * u, beta = s * v, gamma = t;
        ZVec4 e1 = halves(ZVec4{bv, 0, a3v, 1 - a1v}, 2 * d);
        ZVec4 e3;
        for (int i = 0; i < 4; ++i) {
            BigInt c1 = i == 0 ? BigInt(0) : i == 1 ? BigInt(-bv) : i == 2 ? BigInt(a1v + 1) : a2v;
            BigInt c2 = i == 0 ? a2v : i == 1 ? BigInt(1 - a1v) : i == 2 ? cv : BigInt(0);
            BigInt c3 = i == 0 ? BigInt(a1v + 1) : i == 1 ? a3v : i == 2 ? BigInt(0) : BigInt(-cv);
            BigInt num = alpha * c1 + beta * c2 + gamma * c3;
            if (num % 2 != 0) throw std::logic_error("normal form: e3 not integral");
            e3[std::size_t(i)] = num / 2;
        }
        return {e1, e3};
    };
    auto [e1, e3] = plus_pair(a1, a2, a3, b, c);
    // minus eigenvectors by the same construction applied to -m
    auto [e2, e4] = plus_pair(-a1, -a2, -a3, -b, -c);

    // postconditions
    auto apply = [&](const ZMat4& mm, const ZVec4& v) {
        ZVec4 r{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                r[std::size_t(i)] += mm[std::size_t(i * 4 + j)] * v[std::size_t(j)];
        return r;
    };
    if (apply(m, e1) != e1 || apply(m, e3) != e3)
        throw std::logic_error("normal form: +1 eigenvectors failed");
    if (apply(m, e2) != ZVec4{-e2[0], -e2[1], -e2[2], -e2[3]} ||
        apply(m, e4) != ZVec4{-e4[0], -e4[1], -e4[2], -e4[3]})
        throw std::logic_error("normal form: -1 eigenvectors failed");
    if (zskew(e1, e3) != 1 || zskew(e2, e4) != 1)
        throw std::logic_error("normal form: pairing conditions failed");

    out.e = {e1, e2, e3, e4};
    ZMat4 s4x4{};
    for (int i = 0; i < 4; ++i) {
        s4x4[std::size_t(i * 4 + 0)] = e1[std::size_t(i)];
        s4x4[std::size_t(i * 4 + 1)] = e2[std::size_t(i)];
        s4x4[std::size_t(i * 4 + 2)] = e3[std::size_t(i)];
        s4x4[std::size_t(i * 4 + 3)] = e4[std::size_t(i)];
    }
    if (!zmat_is_symplectic(s4x4)) throw std::logic_error("normal form: conjugator not symplectic");
    out.conjugator = s4x4;
    return out;
}

}  // namespace siegel
