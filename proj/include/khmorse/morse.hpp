/*
 * morse.hpp
 *
 * Algebraic discrete Morse theory over based complexes.
 *
 * A matching is a set of arrows (lower cell, upper cell) along invertible
 * differential entries.  Reversing the arrows gives the Morse graph; any
 * directed cycle in it lives in two neighbouring degrees, so acyclicity is
 * checked one level pair at a time.  On a level pair the only branching
 * happens at matched lower cells: z -> x' -> partner(x') for every
 * unmatched entry z -> x' whose target is matched downwards.  Kahn's
 * algorithm on that graph yields the cancellation order.
 *
 * All routines are templates over a complex type C providing
 *   size(), hdeg(c), qshift(c), object(c), label(c),
 *   for_each_entry(c, f(target, unit, invertible)),
 *   for_each_out(c, f(target, const DottedMorphism&)).
 * Matchings are given by a partner function returning no_cell for
 * critical cells.
 */
#ifndef KHMORSE_MORSE_HPP
#define KHMORSE_MORSE_HPP

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "complex.hpp"

namespace khmorse
{

using Arrow = std::pair<CellId, CellId>; // (from at hdeg i, to at hdeg i + 1)

// Explicit arrow list with a dense partner table.
class Matching
{
public:
    Matching() = default;
    Matching(std::size_t cells, std::vector<Arrow> arrows) : arrows_(std::move(arrows)), partner_(cells, no_cell)
    {
        for (auto [a, b] : arrows_)
        {
            if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= cells || static_cast<std::size_t>(b) >= cells)
            {
                bad_ = true;
                continue;
            }
            if (partner_[a] != no_cell || partner_[b] != no_cell)
                doubled_ = true;
            partner_[a] = b;
            partner_[b] = a;
        }
    }

    // Build from a partner function over the cells of a complex.
    template <class C, class P>
    static Matching from_partner(const C& complex, P&& partner)
    {
        std::vector<Arrow> arrows;
        for (CellId c = 0; c < static_cast<CellId>(complex.size()); ++c)
        {
            CellId p = partner(c);
            if (p != no_cell && complex.hdeg(p) == complex.hdeg(c) + 1)
                arrows.emplace_back(c, p);
        }
        return Matching(complex.size(), std::move(arrows));
    }

    CellId operator()(CellId c) const { return partner_[c]; }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    std::size_t size() const { return arrows_.size(); }
    bool has_unknown_cell() const { return bad_; }
    bool has_doubled_cell() const { return doubled_; }

private:
    std::vector<Arrow> arrows_;
    std::vector<CellId> partner_;
    bool bad_ = false;
    bool doubled_ = false;
};

struct MatchingReport
{
    bool ok = true;
    std::string violation; // unknown_cell, not_adjacent, zero_entry, partial_matching, not_invertible, cycle
    std::string message;
    std::vector<CellId> witness;
    std::vector<Arrow> order; // cancellation order, when ok

    explicit operator bool() const { return ok; }
};

namespace detail
{

inline MatchingReport fail(std::string kind, std::string msg, std::vector<CellId> w)
{
    MatchingReport r;
    r.ok = false;
    r.violation = std::move(kind);
    r.message = std::move(msg);
    r.witness = std::move(w);
    return r;
}

} // namespace detail

// Full check of the Morse conditions for the partner function `partner`
// (which must be an involution on matched cells).
template <class C, class P>
MatchingReport validate_partner(const C& complex, P&& partner, bool want_order = true)
{
    const CellId n = static_cast<CellId>(complex.size());
    // Matched arrows: involution, adjacency, invertible entry.
    for (CellId z = 0; z < n; ++z)
    {
        CellId x = partner(z);
        if (x == no_cell)
            continue;
        if (x < 0 || x >= n)
            return detail::fail("unknown_cell", "arrow references a missing cell", {z, x});
        if (partner(x) != z)
            return detail::fail("partial_matching", "a cell is touched by two arrows", {z, x, partner(x)});
        if (complex.hdeg(x) == complex.hdeg(z) - 1)
            continue; // handled from the lower end
        if (complex.hdeg(x) != complex.hdeg(z) + 1)
            return detail::fail("not_adjacent", "arrow does not join neighbouring degrees", {z, x});
        bool found = false, inv = false;
        complex.for_each_entry(z, [&](CellId t, int, bool invertible) {
            if (t == x)
                found = true, inv = invertible;
        });
        if (!found)
            return detail::fail("zero_entry", "matched entry is zero", {z, x});
        if (!inv)
            return detail::fail("not_invertible", "matched entry is not an isomorphism", {z, x});
    }
    // Acyclicity: Kahn on the graph of matched lower cells.
    std::vector<std::uint32_t> indeg(n, 0);
    auto successors = [&](CellId z, auto&& visit) {
        CellId own = partner(z);
        complex.for_each_entry(z, [&](CellId t, int, bool) {
            if (t == own)
                return;
            CellId back = partner(t);
            if (back != no_cell && complex.hdeg(back) == complex.hdeg(z))
                visit(back);
        });
    };
    auto is_lower = [&](CellId z) {
        CellId x = partner(z);
        return x != no_cell && complex.hdeg(x) == complex.hdeg(z) + 1;
    };
    // Successor lists are computed once (CSR layout) and reused by Kahn.
    std::vector<std::size_t> off(n + 1, 0);
    std::vector<CellId> succ;
    std::size_t lower_count = 0;
    for (CellId z = 0; z < n; ++z)
    {
        off[z] = succ.size();
        if (is_lower(z))
        {
            ++lower_count;
            successors(z, [&](CellId y) {
                succ.push_back(y);
                ++indeg[y];
            });
        }
    }
    off[n] = succ.size();
    std::deque<CellId> queue;
    for (CellId z = 0; z < n; ++z)
        if (is_lower(z) && indeg[z] == 0)
            queue.push_back(z);
    MatchingReport ok;
    std::size_t done = 0;
    while (!queue.empty())
    {
        CellId z = queue.front();
        queue.pop_front();
        ++done;
        if (want_order)
            ok.order.emplace_back(z, partner(z));
        for (std::size_t i = off[z]; i < off[z + 1]; ++i)
            if (--indeg[succ[i]] == 0)
                queue.push_back(succ[i]);
    }
    if (done != lower_count)
    {
        // Walk backwards inside the remaining subgraph to extract a cycle.
        std::vector<CellId> rest;
        for (CellId z = 0; z < n; ++z)
            if (is_lower(z) && indeg[z] > 0)
                rest.push_back(z);
        std::map<CellId, CellId> next;
        CellId cur = rest.front();
        std::vector<CellId> path;
        std::map<CellId, std::size_t> pos;
        while (!pos.count(cur))
        {
            pos[cur] = path.size();
            path.push_back(cur);
            CellId nxt = no_cell;
            successors(cur, [&](CellId y) {
                if (nxt == no_cell && indeg[y] > 0)
                    nxt = y;
            });
            if (nxt == no_cell)
                break;
            cur = nxt;
        }
        std::vector<CellId> cycle;
        if (pos.count(cur))
            for (std::size_t i = pos[cur]; i < path.size(); ++i)
            {
                cycle.push_back(path[i]);
                cycle.push_back(partner(path[i]));
            }
        return detail::fail("cycle", "the Morse graph has a directed zig-zag cycle", cycle);
    }
    return ok;
}

template <class C>
MatchingReport validate_matching(const C& complex, const Matching& M)
{
    if (M.has_unknown_cell())
        return detail::fail("unknown_cell", "arrow references a missing cell", {});
    if (M.has_doubled_cell())
        return detail::fail("partial_matching", "a cell is touched by two arrows", {});
    for (auto [a, b] : M.arrows())
        if (complex.hdeg(b) != complex.hdeg(a) + 1)
            return detail::fail("not_adjacent", "arrow does not raise hdeg by one", {a, b});
    return validate_partner(complex, M);
}

// ---------------------------------------------------------------------------
// Zig-zag paths

struct ZigZagPath
{
    std::vector<CellId> cells; // c1, x1, z2, x2, ..., c2
    int reversed = 0;           // number of descending (matched) steps
};

template <class C, class P>
std::vector<ZigZagPath> zigzag_paths(const C& complex, P&& partner, CellId c1, CellId c2)
{
    std::vector<ZigZagPath> out;
    if (complex.hdeg(c2) != complex.hdeg(c1) + 1)
        return out;
    ZigZagPath cur;
    cur.cells.push_back(c1);
    std::function<void(CellId)> walk = [&](CellId z) {
        CellId own = partner(z);
        std::vector<CellId> targets;
        complex.for_each_entry(z, [&](CellId t, int, bool) { targets.push_back(t); });
        for (CellId x : targets)
        {
            if (x == own)
                continue;
            if (x == c2)
            {
                cur.cells.push_back(x);
                out.push_back(cur);
                cur.cells.pop_back();
                continue;
            }
            CellId back = partner(x);
            if (back == no_cell || complex.hdeg(back) != complex.hdeg(z))
                continue;
            cur.cells.push_back(x);
            cur.cells.push_back(back);
            ++cur.reversed;
            walk(back);
            --cur.reversed;
            cur.cells.pop_back();
            cur.cells.pop_back();
        }
    };
    walk(c1);
    return out;
}

// ---------------------------------------------------------------------------
// Morse complex

// Memoized sum over zig-zag paths.  phi(y) maps each critical cell one
// degree up to the signed sum of path compositions starting at y.
template <class C, class P>
class MorseReducer
{
public:
    using Phi = std::map<CellId, DottedMorphism>;

    MorseReducer(const C& complex, P partner) : c_(complex), partner_(std::move(partner)) {}

    const Phi& phi(CellId y)
    {
        if (auto it = memo_.find(y); it != memo_.end())
            return it->second;
        Phi acc;
        CellId own = partner_(y);
        std::vector<std::pair<CellId, DottedMorphism>> outs;
        c_.for_each_out(y, [&](CellId x, const DottedMorphism& d) { outs.emplace_back(x, d); });
        for (auto& [x, d] : outs)
        {
            if (x == own)
                continue;
            CellId back = partner_(x);
            if (back == no_cell)
            {
                add(acc, x, d);
                continue;
            }
            if (c_.hdeg(back) != c_.hdeg(y))
                continue; // x is matched upwards: dead end
            int eps = unit(back, x);
            const Phi& rest = phi(back);
            for (auto& [t, g] : rest)
                add(acc, t, compose(g, d) * (-eps));
        }
        return memo_.emplace(y, std::move(acc)).first->second;
    }

    std::size_t memo_size() const { return memo_.size(); }

private:
    static void add(Phi& acc, CellId t, const DottedMorphism& f)
    {
        if (f.is_zero())
            return;
        auto it = acc.find(t);
        if (it == acc.end())
            acc.emplace(t, f);
        else
        {
            it->second += f;
            if (it->second.is_zero())
                acc.erase(it);
        }
    }

    int unit(CellId z, CellId x) const
    {
        int u = 0;
        c_.for_each_entry(z, [&](CellId t, int s, bool inv) {
            if (t == x && inv)
                u = s;
        });
        if (!u)
            throw InvariantViolation("matched entry is not invertible");
        return u;
    }

    const C& c_;
    P partner_;
    std::unordered_map<CellId, Phi> memo_;
};

// Morse complex on the given critical cells (ascending id order is kept).
template <class C, class P>
BasedComplex morse_complex_on(const C& complex, P partner, const std::vector<CellId>& critical)
{
    BasedComplex out;
    std::unordered_map<CellId, CellId> new_id;
    for (CellId c : critical)
        new_id[c] = out.add_cell(Cell{complex.hdeg(c), complex.qshift(c), complex.object(c), complex.label(c), {}});
    MorseReducer<C, P> red(complex, partner);
    for (CellId c : critical)
        for (auto& [t, f] : red.phi(c))
        {
            auto it = new_id.find(t);
            if (it == new_id.end())
                throw InvariantViolation("zig-zag path ends outside the critical cells");
            out.add_entry(new_id[c], it->second, f);
        }
    return out;
}

template <class C, class P>
BasedComplex morse_complex(const C& complex, P partner, bool validate = true)
{
    if (validate)
        if (auto rep = validate_partner(complex, partner, false); !rep)
            throw InvariantViolation("not a Morse matching: " + rep.message);
    std::vector<CellId> critical;
    for (CellId c = 0; c < static_cast<CellId>(complex.size()); ++c)
        if (partner(c) == no_cell)
            critical.push_back(c);
    return morse_complex_on(complex, partner, critical);
}

template <class C>
BasedComplex morse_complex(const C& complex, const Matching& M)
{
    if (auto rep = validate_matching(complex, M); !rep)
        throw InvariantViolation("not a Morse matching: " + rep.message);
    return morse_complex(complex, std::cref(M), false);
}

// ---------------------------------------------------------------------------
// Gaussian elimination

// Repeatedly cancel invertible entries (lowest hdeg first, then lowest
// source id, then lowest target id) until none is left.
inline BasedComplex gaussian_eliminate(const BasedComplex& C)
{
    const CellId n = static_cast<CellId>(C.size());
    std::vector<std::map<CellId, DottedMorphism>> out(n);
    std::vector<std::set<CellId>> in(n);
    std::vector<char> alive(n, 1);
    for (CellId a = 0; a < n; ++a)
        for (auto& [b, f] : C.row(a))
        {
            out[a].emplace(b, f);
            in[b].insert(a);
        }
    auto add = [&](CellId x, CellId y, const DottedMorphism& f) {
        if (f.is_zero())
            return;
        auto it = out[x].find(y);
        if (it == out[x].end())
        {
            out[x].emplace(y, f);
            in[y].insert(x);
            return;
        }
        it->second += f;
        if (it->second.is_zero())
        {
            out[x].erase(it);
            in[y].erase(x);
        }
    };
    auto remove_cell = [&](CellId c) {
        for (auto& [t, f] : out[c])
            in[t].erase(c);
        for (CellId s : in[c])
            out[s].erase(c);
        out[c].clear();
        in[c].clear();
        alive[c] = 0;
    };
    auto levels = C.levels();
    for (auto& [h, cells] : levels)
    {
        bool changed = true;
        while (changed)
        {
            changed = false;
            for (CellId b : cells)
            {
                if (!alive[b])
                    continue;
                CellId c = no_cell;
                int eps = 0;
                for (auto& [t, f] : out[b])
                    if (int u = f.invertible_sign())
                    {
                        c = t;
                        eps = u;
                        break;
                    }
                if (c == no_cell)
                    continue;
                // d'(x -> y) = d(x -> y) - d(b -> y) phi^{-1} d(x -> c)
                std::vector<std::pair<CellId, DottedMorphism>> gammas, betas;
                for (CellId x : in[c])
                    if (x != b)
                        gammas.emplace_back(x, out[x].at(c));
                for (auto& [y, f] : out[b])
                    if (y != c)
                        betas.emplace_back(y, f);
                for (auto& [x, gamma] : gammas)
                    for (auto& [y, beta] : betas)
                        add(x, y, compose(beta, gamma) * (-eps));
                remove_cell(b);
                remove_cell(c);
                changed = true;
            }
        }
    }
    BasedComplex R;
    std::vector<CellId> nid(n, no_cell);
    for (CellId a = 0; a < n; ++a)
        if (alive[a])
            nid[a] = R.add_cell(C.cell(a));
    for (CellId a = 0; a < n; ++a)
        if (alive[a])
            for (auto& [b, f] : out[a])
                R.add_entry(nid[a], nid[b], f);
    return R;
}

} // namespace khmorse

#endif
