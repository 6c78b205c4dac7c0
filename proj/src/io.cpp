#include "siegel/io.hpp"

#include <fstream>
#include <sstream>

namespace siegel {

Subgroup parse_subgroup_json(const std::string& text, bool adjoin_center) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("subgroup file: ") + e.what());
    }
    if (!j.contains("level")) throw std::invalid_argument("subgroup file: missing \"level\"");
    if (!j["level"].is_number_unsigned() && !j["level"].is_number_integer())
        throw std::invalid_argument("subgroup file: \"level\" must be an integer");
    i64 level = j["level"].get<i64>();
    if (level < 1 || level > i64(kMaxModulus))
        throw std::invalid_argument("subgroup file: level out of range");
    std::vector<Mat4> gens;
    if (j.contains("generators")) {
        if (!j["generators"].is_array())
            throw std::invalid_argument("subgroup file: \"generators\" must be an array");
        std::size_t idx = 0;
        for (const auto& row : j["generators"]) {
            if (!row.is_array() || row.size() != 16)
                throw std::invalid_argument("subgroup file: generator " + std::to_string(idx) +
                                            " must hold 16 integers");
            std::array<i64, 16> entries{};
            for (std::size_t k = 0; k < 16; ++k) entries[k] = row[k].get<i64>();
            Mat4 m(u32(level), entries);
            if (!m.is_symplectic())
                throw std::domain_error("subgroup file: generator " + std::to_string(idx) +
                                        " is not symplectic at level " + std::to_string(level));
            gens.push_back(std::move(m));
            ++idx;
        }
    }
    Subgroup h(u32(level), std::move(gens));
    return adjoin_center ? h.with_center_adjoined() : h;
}

Subgroup load_subgroup(const std::string& path, bool adjoin_center) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open subgroup file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_subgroup_json(ss.str(), adjoin_center);
}

std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(r);
    if (boost::multiprecision::denominator(r) != 1)
        os << "/" << boost::multiprecision::denominator(r);
    return os.str();
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational: " + s);
    }
}

Json matrix_to_json(const Mat4& m) {
    Json row = Json::array();
    for (int i = 0; i < 16; ++i) row.push_back(m.e[std::size_t(i)]);
    return row;
}

Json report_to_json(const RamificationReport& rep) {
    Json j;
    j["level"] = rep.level;
    j["subgroup_order"] = rep.subgroup_order.str();
    j["index"] = (sp4_order(rep.level) / rep.subgroup_order).str();
    Json fam;
    fam["D"] = {{"count", rep.count_d}, {"sum", rational_str(rep.sum_d)},
                {"mean", rational_str(rep.mean(BoundFamily::D))}};
    fam["E"] = {{"count", rep.count_e}, {"sum", rational_str(rep.sum_e)},
                {"mean", rational_str(rep.mean(BoundFamily::E))}};
    fam["DD"] = {{"count", rep.count_l}, {"sum", rational_str(rep.sum_l)},
                 {"mean", rational_str(rep.mean(BoundFamily::DD))}};
    fam["F"] = {{"count", rep.count_f}, {"sum", rational_str(rep.sum_f)},
                {"mean", rational_str(rep.mean(BoundFamily::F))}};
    fam["DDD"] = {{"count", rep.count_t}, {"orbit_sum", rational_str(rep.sum_mult)},
                  {"mean", rational_str(rep.mean(BoundFamily::DDD))}};
    j["families"] = fam;
    Json rd = Json::array();
    for (const auto& r : rep.ram_d) rd.push_back(rational_str(r));
    j["ram_d"] = rd;
    j["ram_e"] = rep.ram_e;
    j["ram_f"] = rep.ram_f;
    if (rep.lines_kept) {
        Json rl = Json::array();
        for (std::size_t i = 0; i < rep.ram_l.size(); ++i)
            rl.push_back(Json{{"value", rational_str(rep.ram_l[i])},
                              {"side_a", rational_str(rep.ram_l_sides[i][0])},
                              {"side_b", rational_str(rep.ram_l_sides[i][1])}});
        j["ram_lines"] = rl;
    }
    Json orbits = Json::array();
    for (const auto& t : rep.triple_orbits)
        orbits.push_back(Json{{"rep", t.rep},
                              {"orbit_size", t.orbit_size},
                              {"delta", rational_str(t.delta)},
                              {"mult_bound", rational_str(t.mult_bound)},
                              {"mult", t.mult.str()}});
    j["triple_orbits"] = orbits;
    return j;
}

Json verdict_to_json(const BoundVerdict& v) {
    Json j;
    j["family"] = family_name(v.family);
    j["epsilon"] = rational_str(v.epsilon);
    j["index"] = v.index.str();
    j["strict"] = v.strict;
    if (v.bound_infinite) j["bound"] = "infinite";
    else j["bound"] = rational_str(v.bound);
    j["satisfied"] = v.satisfied;
    return j;
}

Json identity_report_to_json(const IdentityReport& rep) {
    Json j;
    j["level"] = rep.level;
    j["trials"] = rep.trials;
    j["seed"] = rep.seed;
    j["checks"] = rep.checks;
    Json fails = Json::array();
    for (const auto& f : rep.failures) {
        Json e;
        e["identity"] = f.identity;
        e["trial"] = f.trial;
        e["params"] = f.params;
        fails.push_back(e);
    }
    j["failures"] = fails;
    return j;
}

Json census_to_json(u32 p, u32 s, const Rational& eps, const CensusResult& res) {
    Json j;
    j["p"] = p;
    j["s"] = s;
    j["epsilon"] = rational_str(eps);
    j["count"] = res.count;
    j["bound"] = rational_str(res.bound);
    j["satisfied"] = res.satisfied;
    return j;
}

namespace {

Json vec_json(const Vec4& v) { return Json::array({v[0], v[1], v[2], v[3]}); }

}  // namespace

Json atlas_family_json(const Atlas& atlas, const std::string& family, bool dump) {
    Json j;
    j["level"] = atlas.level();
    j["family"] = family;
    std::size_t count;
    Json items = Json::array();
    if (family == "D") {
        count = atlas.divisors().size();
        if (dump)
            for (const auto& d : atlas.divisors()) items.push_back(vec_json(d.v));
    } else if (family == "cusp") {
        count = atlas.cusps().size();
        if (dump)
            for (const auto& c : atlas.cusps()) {
                const auto& pl = atlas.planes()[c.plane];
                items.push_back(Json{{"w1", vec_json(pl.w1)}, {"w2", vec_json(pl.w2)},
                                     {"f", c.f_value}});
            }
    } else if (family == "E") {
        count = atlas.epairs().size();
        if (dump)
            for (const auto& e : atlas.epairs())
                items.push_back(Json{{"w1_basis", Json::array({vec_json(e.a1), vec_json(e.a2)})},
                                     {"w2_basis", Json::array({vec_json(e.b1), vec_json(e.b2)})}});
    } else if (family == "F") {
        count = atlas.fdivisors().size();
        if (dump)
            for (const auto& f : atlas.fdivisors()) items.push_back(matrix_to_json(f.psi.rep));
    } else if (family == "line") {
        count = atlas.lines().size();
        if (dump)
            for (const auto& l : atlas.lines())
                items.push_back(Json{{"va", vec_json(l.va)}, {"vb", vec_json(l.vb)},
                                     {"cusp", l.cusp}});
    } else if (family == "triple") {
        count = atlas.triples().size();
        if (dump)
            for (const auto& t : atlas.triples())
                items.push_back(Json{{"wa", vec_json(t.wa)}, {"wb", vec_json(t.wb)},
                                     {"wc", vec_json(t.wc)}, {"cusp", t.cusp}});
    } else {
        throw std::invalid_argument("unknown family: " + family);
    }
    j["count"] = count;
    if (dump) j["items"] = items;
    return j;
}

std::string atlas_family_csv(const Atlas& atlas, const std::string& family) {
    std::ostringstream os;
    auto vec_csv = [](const Vec4& v) {
        std::ostringstream o;
        o << v[0] << "," << v[1] << "," << v[2] << "," << v[3];
        return o.str();
    };
    if (family == "D") {
        os << "v1,v2,v3,v4\n";
        for (const auto& d : atlas.divisors()) os << vec_csv(d.v) << "\n";
    } else if (family == "cusp") {
        os << "w1_1,w1_2,w1_3,w1_4,w2_1,w2_2,w2_3,w2_4,f\n";
        for (const auto& c : atlas.cusps()) {
            const auto& pl = atlas.planes()[c.plane];
            os << vec_csv(pl.w1) << "," << vec_csv(pl.w2) << "," << c.f_value << "\n";
        }
    } else if (family == "E") {
        os << "a1,a2,a3,a4,b1,b2,b3,b4,c1,c2,c3,c4,d1,d2,d3,d4\n";
        for (const auto& e : atlas.epairs())
            os << vec_csv(e.a1) << "," << vec_csv(e.a2) << "," << vec_csv(e.b1) << ","
               << vec_csv(e.b2) << "\n";
    } else if (family == "F") {
        os << "entries\n";
        for (const auto& f : atlas.fdivisors()) {
            for (int i = 0; i < 16; ++i) os << (i ? "," : "") << f.psi.rep.e[std::size_t(i)];
            os << "\n";
        }
    } else if (family == "line") {
        os << "va_1,va_2,va_3,va_4,vb_1,vb_2,vb_3,vb_4,cusp\n";
        for (const auto& l : atlas.lines())
            os << vec_csv(l.va) << "," << vec_csv(l.vb) << "," << l.cusp << "\n";
    } else if (family == "triple") {
        os << "wa_1,wa_2,wa_3,wa_4,wb_1,wb_2,wb_3,wb_4,wc_1,wc_2,wc_3,wc_4,cusp\n";
        for (const auto& t : atlas.triples())
            os << vec_csv(t.wa) << "," << vec_csv(t.wb) << "," << vec_csv(t.wc) << "," << t.cusp
               << "\n";
    } else {
        throw std::invalid_argument("unknown family: " + family);
    }
    return os.str();
}

// ---- expression parser for exact point coordinates ----

namespace {

struct ExprParser {
    const std::string& s;
    std::size_t pos = 0;
    std::shared_ptr<const CycloField> f;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("expression error at position " + std::to_string(pos) + ": " +
                                    what);
    }

    Cyclo parse_expr() {
        Cyclo v = parse_term();
        for (;;) {
            if (eat('+')) v += parse_term();
            else if (eat('-')) v -= parse_term();
            else return v;
        }
    }
    Cyclo parse_term() {
        Cyclo v = parse_factor();
        for (;;) {
            skip_ws();
            if (eat('*')) v *= parse_factor();
            else return v;
        }
    }
    Cyclo parse_factor() {
        Cyclo base = parse_atom();
        skip_ws();
        if (eat('^')) {
            skip_ws();
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(u8(s[pos]))) ++pos;
            if (start == pos) fail("expected an exponent");
            u64 e = std::stoull(s.substr(start, pos - start));
            return base.pow(e);
        }
        return base;
    }
    Cyclo parse_atom() {
        skip_ws();
        if (eat('(')) {
            Cyclo v = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (eat('-')) return -parse_atom();
        if (pos < s.size() && std::isalpha(u8(s[pos]))) {
            std::size_t start = pos;
            while (pos < s.size() && std::isalpha(u8(s[pos]))) ++pos;
            std::string name = s.substr(start, pos - start);
            if (name == "z") return Cyclo::root_of_unity(f, 1);
            if (name == "theta") return Cyclo::root_of_order(f, 5);
            if (name == "i") return Cyclo::root_of_order(f, 4);
            fail("unknown symbol '" + name + "' (expected z, theta or i)");
        }
        // rational literal
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(u8(s[pos]))) ++pos;
        if (start == pos) fail("expected a number or symbol");
        std::string num = s.substr(start, pos - start);
        skip_ws();
        if (pos < s.size() && s[pos] == '/') {
            ++pos;
            skip_ws();
            std::size_t dstart = pos;
            while (pos < s.size() && std::isdigit(u8(s[pos]))) ++pos;
            if (dstart == pos) fail("expected a denominator");
            return Cyclo(f, Rational(BigInt(num), BigInt(s.substr(dstart, pos - dstart))));
        }
        return Cyclo(f, Rational(BigInt(num)));
    }
};

}  // namespace

Cyclo parse_cyclo_expr(const std::string& text, std::shared_ptr<const CycloField> field) {
    ExprParser p{text, 0, std::move(field)};
    Cyclo v = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing characters");
    return v;
}

QuarticPoint parse_quartic_point(const std::string& text,
                                 std::shared_ptr<const CycloField> field) {
    std::array<Cyclo, 6> coords;
    std::size_t start = 0;
    for (int i = 0; i < 6; ++i) {
        std::size_t colon = (i == 5) ? text.size() : text.find(':', start);
        if (colon == std::string::npos)
            throw std::invalid_argument("quartic point needs six ':'-separated coordinates");
        coords[std::size_t(i)] = parse_cyclo_expr(text.substr(start, colon - start), field);
        start = colon + 1;
    }
    if (start <= text.size() && text.find(':', start) != std::string::npos)
        throw std::invalid_argument("quartic point needs exactly six coordinates");
    return QuarticPoint(std::move(coords));
}

std::vector<Weight> parse_weights(const std::string& text) {
    std::vector<Weight> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t semi = text.find(';', start);
        std::string part = text.substr(start, semi == std::string::npos ? std::string::npos
                                                                        : semi - start);
        if (!part.empty()) {
            Weight w{};
            std::size_t p0 = 0;
            for (int i = 0; i < 3; ++i) {
                std::size_t comma = (i == 2) ? part.size() : part.find(',', p0);
                if (comma == std::string::npos)
                    throw std::invalid_argument("weights: expected three comma-separated entries");
                w[std::size_t(i)] = u32(std::stoul(part.substr(p0, comma - p0)));
                p0 = comma + 1;
            }
            out.push_back(w);
        }
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    return out;
}

}  // namespace siegel
