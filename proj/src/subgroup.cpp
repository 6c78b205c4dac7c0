#include "siegel/subgroup.hpp"

#include <algorithm>
#include <deque>

namespace siegel {

StabilizerChain StabilizerChain::build(u32 n, const std::vector<Mat4>& gens,
                                       const BigInt& order_ceiling) {
    StabilizerChain c;
    c.n_ = n;
    c.ceiling_ = order_ceiling;
    for (const auto& g : gens) {
        if (g.n != n) throw LevelMismatchError("stabilizer chain: generator level mismatch");
        c.insert(g, 0);
    }
    c.recompute_order();
    return c;
}

void StabilizerChain::recompute_order() {
    order_ = 1;
    for (const auto& lv : levels_) order_ *= BigInt(lv.orbit.size());
}

void StabilizerChain::check_ceiling(std::size_t li) const {
    BigInt prod = 1;
    for (const auto& lv : levels_) prod *= BigInt(lv.orbit.size());
    if (prod > ceiling_)
        throw CeilingExceededError("stabilizer chain order ceiling exceeded", li);
}

void StabilizerChain::insert(Mat4 g, std::size_t level) {
    pending_.emplace_back(std::move(g), level);
    drain();
}

void StabilizerChain::drain() {
    while (!pending_.empty()) {
        auto [g, level] = std::move(pending_.front());
        pending_.pop_front();
        // sift: peel transversal factors until the image of the base leaves
        // the orbit; the residue fixes all bases above the stall level
        std::size_t stall = level;
        bool trivial = false;
        while (stall < levels_.size()) {
            if (g.is_identity()) { trivial = true; break; }
            Vec4 x = g * levels_[stall].base;
            auto it = levels_[stall].position.find(x.encode());
            if (it == levels_[stall].position.end()) break;
            g = levels_[stall].rep_inv[it->second] * g;
            ++stall;
        }
        if (trivial || g.is_identity()) continue;
        if (stall == levels_.size()) {
            // new level, based at the first point g moves
            Level lv;
            u64 total = u64(n_) * n_ * n_ * n_;
            for (u64 k = 0; k < total; ++k) {
                Vec4 v(n_, {i64(k % n_), i64(k / n_ % n_), i64(k / (u64(n_) * n_) % n_),
                            i64(k / (u64(n_) * n_ * n_))});
                if (!(g * v == v)) { lv.base = v; break; }
            }
            lv.orbit.push_back(lv.base.encode());
            lv.position[lv.base.encode()] = 0;
            lv.rep.push_back(Mat4::identity(n_));
            lv.rep_inv.push_back(Mat4::identity(n_));
            levels_.push_back(std::move(lv));
        }
        // strong generator sets are cumulative: the residue fixes bases
        // 0..stall-1, so it acts at every level up to its stall level
        Mat4 ginv = g.symplectic_inverse();
        for (std::size_t j = 0; j <= stall; ++j) {
            levels_[j].gens.push_back(g);
            levels_[j].gen_invs.push_back(ginv);
        }
        for (std::size_t j = 0; j <= stall; ++j) {
            extend_orbit(j);
            emit_schreier(j);
        }
    }
}

void StabilizerChain::extend_orbit(std::size_t li) {
    // scan (point, generator) pairs not scanned before; new points join the
    // scan in place
    Level& lv = levels_[li];
    std::size_t ng = lv.gens.size();
    for (std::size_t xi = 0; xi < lv.scan_points; ++xi) {
        Vec4 x = Vec4::decode(n_, lv.orbit[xi]);
        for (std::size_t s = lv.scan_gens; s < ng; ++s) {
            Vec4 y = lv.gens[s] * x;
            u32 yk = y.encode();
            if (lv.position.count(yk)) continue;
            lv.position[yk] = u32(lv.orbit.size());
            lv.orbit.push_back(yk);
            lv.rep.push_back(lv.gens[s] * lv.rep[xi]);
            lv.rep_inv.push_back(lv.rep_inv[xi] * lv.gen_invs[s]);
        }
    }
    for (std::size_t xi = lv.scan_points; xi < lv.orbit.size(); ++xi) {
        Vec4 x = Vec4::decode(n_, lv.orbit[xi]);
        for (std::size_t s = 0; s < ng; ++s) {
            Vec4 y = lv.gens[s] * x;
            u32 yk = y.encode();
            if (lv.position.count(yk)) continue;
            lv.position[yk] = u32(lv.orbit.size());
            lv.orbit.push_back(yk);
            lv.rep.push_back(lv.gens[s] * lv.rep[xi]);
            lv.rep_inv.push_back(lv.rep_inv[xi] * lv.gen_invs[s]);
        }
    }
    lv.scan_points = lv.orbit.size();
    lv.scan_gens = ng;
    check_ceiling(li);
}

void StabilizerChain::emit_schreier(std::size_t li) {
    // queue Schreier generators for (orbit point, generator) pairs not seen
    // before; the processed region stays rectangular, so the skip test is exact
    Level& lv = levels_[li];
    std::size_t np = lv.orbit.size(), ng = lv.gens.size();
    std::size_t old_p = lv.points_done, old_g = lv.gens_done;
    if (old_p == np && old_g == ng) return;
    lv.points_done = np;
    lv.gens_done = ng;
    for (std::size_t xi = 0; xi < np; ++xi) {
        Vec4 x = Vec4::decode(n_, lv.orbit[xi]);
        for (std::size_t s = 0; s < ng; ++s) {
            if (xi < old_p && s < old_g) continue;
            Vec4 y = lv.gens[s] * x;
            u32 yi = lv.position.at(y.encode());
            Mat4 schreier = lv.rep_inv[yi] * (lv.gens[s] * lv.rep[xi]);
            if (!schreier.is_identity()) pending_.emplace_back(std::move(schreier), li + 1);
        }
    }
}

bool StabilizerChain::verify() const {
    for (std::size_t li = 0; li < levels_.size(); ++li) {
        const Level& lv = levels_[li];
        for (std::size_t xi = 0; xi < lv.orbit.size(); ++xi) {
            Vec4 x = Vec4::decode(n_, lv.orbit[xi]);
            for (std::size_t s = 0; s < lv.gens.size(); ++s) {
                Vec4 y = lv.gens[s] * x;
                auto it = lv.position.find(y.encode());
                if (it == lv.position.end()) return false;  // orbit not closed
                Mat4 h = lv.rep_inv[it->second] * (lv.gens[s] * lv.rep[xi]);
                for (std::size_t j = li + 1; j < levels_.size(); ++j) {
                    if (h.is_identity()) break;
                    Vec4 b = h * levels_[j].base;
                    auto jt = levels_[j].position.find(b.encode());
                    if (jt == levels_[j].position.end()) return false;
                    h = levels_[j].rep_inv[jt->second] * h;
                }
                if (!h.is_identity()) return false;
            }
        }
    }
    return true;
}

std::vector<std::size_t> StabilizerChain::orbit_sizes() const {
    std::vector<std::size_t> out;
    for (const auto& lv : levels_) out.push_back(lv.orbit.size());
    return out;
}

bool StabilizerChain::contains(const Mat4& g) const {
    if (g.n != n_) throw LevelMismatchError("membership: level mismatch");
    Mat4 h = g;
    for (const auto& lv : levels_) {
        if (h.is_identity()) return true;
        Vec4 x = h * lv.base;
        auto it = lv.position.find(x.encode());
        if (it == lv.position.end()) return false;
        h = lv.rep_inv[it->second] * h;
    }
    return h.is_identity();
}

Mat4 StabilizerChain::sample(SplitMix64& rng) const {
    Mat4 g = Mat4::identity(n_);
    for (const auto& lv : levels_)
        g = g * lv.rep[std::size_t(rng.below(lv.orbit.size()))];
    return g;
}

BigInt sp4_order(u32 n) {
    check_level(n);
    BigInt num = 1;
    for (int i = 0; i < 10; ++i) num *= n;
    BigInt den = 1;
    for (const auto& pp : factorize(n)) {
        BigInt p2 = BigInt(pp.p) * pp.p, p4 = p2 * p2;
        num *= (p2 - 1) * (p4 - 1);
        den *= p2 * p4;
    }
    return num / den;
}

std::vector<Mat4> sp4_generators(u32 n) {
    std::vector<std::array<i64, 4>> vs = {
        {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1},
        {1, 0, 1, 0}, {0, 1, 0, 1}, {1, 0, 0, 1}, {0, 1, 1, 0},
        {1, 1, 0, 0}, {0, 0, 1, 1},
    };
    std::vector<Mat4> gens;
    gens.reserve(vs.size());
    for (const auto& v : vs) gens.push_back(transvection(Vec4(n, v), 1));
    return gens;
}

Subgroup::Subgroup(u32 n, std::vector<Mat4> gens) : level(n), generators(std::move(gens)) {
    check_level(n);
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (generators[i].n != n)
            throw LevelMismatchError("subgroup generator " + std::to_string(i) + ": level mismatch");
        if (!generators[i].is_symplectic())
            throw std::domain_error("subgroup generator " + std::to_string(i) + " is not symplectic");
    }
}

Subgroup Subgroup::full_group(u32 n) { return Subgroup(n, sp4_generators(n)); }

Subgroup Subgroup::center(u32 n) { return Subgroup(n, {-Mat4::identity(n)}); }

const StabilizerChain& Subgroup::chain(const BigInt& ceiling) const {
    if (!chain_)
        chain_ = std::make_shared<const StabilizerChain>(
            StabilizerChain::build(level, generators, ceiling));
    return *chain_;
}

Subgroup Subgroup::with_center_adjoined() const {
    auto gens = generators;
    gens.push_back(-Mat4::identity(level));
    return Subgroup(level, std::move(gens));
}

Subgroup closure(const Subgroup& h, const BigInt& ceiling) {
    Subgroup out = h;
    out.chain(ceiling);
    return out;
}

BigInt subgroup_index(const Subgroup& g, const Subgroup& h) {
    if (g.level != h.level) throw LevelMismatchError("index: level mismatch");
    for (const auto& x : h.generators)
        if (!g.contains(x)) throw std::domain_error("index: H is not contained in G");
    BigInt go = g.order(), ho = h.order();
    if (go % ho != 0) throw std::logic_error("index: order does not divide");
    return go / ho;
}

std::vector<Mat4> enumerate_elements(const Subgroup& h, std::size_t cap) {
    std::unordered_map<Mat4::Key, std::size_t, Mat4KeyHash> seen;
    std::vector<Mat4> elems{Mat4::identity(h.level)};
    seen[elems[0].key()] = 0;
    std::deque<std::size_t> frontier{0};
    while (!frontier.empty()) {
        std::size_t i = frontier.front();
        frontier.pop_front();
        for (const auto& s : h.generators) {
            Mat4 y = elems[i] * s;
            if (seen.count(y.key())) continue;
            if (elems.size() >= cap)
                throw CeilingExceededError("enumerate_elements: cap exceeded", elems.size());
            seen[y.key()] = elems.size();
            frontier.push_back(elems.size());
            elems.push_back(std::move(y));
        }
    }
    return elems;
}

MembershipOracle::MembershipOracle(const Subgroup& h, std::size_t enumeration_cap) : h_(h) {
    BigInt ord = h.order();
    if (ord <= BigInt(enumeration_cap)) {
        for (const auto& g : enumerate_elements(h, enumeration_cap + 1)) elems_.insert(g.key());
        enumerated_ = true;
    }
}

bool MembershipOracle::contains(const Mat4& g) const {
    if (enumerated_) return elems_.count(g.key()) != 0;
    return h_.contains(g);
}

}  // namespace siegel
