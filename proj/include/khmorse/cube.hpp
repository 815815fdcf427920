/*
 * cube.hpp
 *
 * Cube of resolutions of a braid word and its delooped form.
 *
 * Geometry.  A braid on n strands with N letters is drawn bottom to top.
 * Node (l, j) is strand j (0-based) at level l, 0 <= l <= N; level 0 is the
 * bottom boundary and level N the top.  The boundary is read clockwise from
 * a basepoint at nine o'clock: tops t1..tn take positions 0..n-1 and the
 * bottoms bn..b1 take n..2n-1.
 *
 * Crossing r (0-based) of letter sigma_i joins levels r and r + 1.  Its
 * local picture occupies two edge slots, i - 1 and i.  In the vertical
 * resolution both slots are straight strands.  In the horizontal one slot
 * i - 1 is the cap joining (r, i-1) to (r, i) and slot i is the cup joining
 * (r+1, i-1) to (r+1, i).  sigma_i is a negative crossing: bit 0 picks the
 * horizontal resolution and bit 1 the vertical one.  The inverse letter is
 * the other way round.
 *
 * A circle's origin is the lowest crossing whose cup lies on it; circles
 * are numbered by origin.  Delooping replaces a cell with c circles by 2^c
 * cells in lexicographic label order (-1 before +1, first circle most
 * significant), each shifted by the sum of its labels.
 */
#ifndef KHMORSE_CUBE_HPP
#define KHMORSE_CUBE_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "complex.hpp"

namespace khmorse
{

// ---------------------------------------------------------------------------
// Braid words

struct Letter
{
    int gen = 1;      // generator index, 1..strands-1
    int exponent = 1; // +1 for sigma_i, -1 for its inverse

    bool operator==(const Letter&) const = default;
};

// The one place tying letters to crossing signs.
inline int crossing_sign(const Letter& l)
{
    return -l.exponent;
}

// Whether bit value `bit` resolves this letter horizontally (cup and cap).
inline bool horizontal_resolution(const Letter& l, int bit)
{
    return crossing_sign(l) < 0 ? bit == 0 : bit == 1;
}

struct BraidWord
{
    int strands = 1;
    std::vector<Letter> letters;

    BraidWord() = default;
    BraidWord(int n, std::vector<Letter> ls) : strands(n), letters(std::move(ls)) { validate(); }

    void validate() const
    {
        if (strands < 1)
            throw ParseError("braid must have at least one strand", "bad_strand_index");
        for (auto& l : letters)
            if (l.gen < 1 || l.gen >= strands || (l.exponent != 1 && l.exponent != -1))
                throw ParseError("generator s" + std::to_string(l.gen) + " out of range for " +
                                     std::to_string(strands) + " strands",
                                 "bad_strand_index");
    }

    int size() const { return static_cast<int>(letters.size()); }

    int n_plus() const
    {
        int c = 0;
        for (auto& l : letters)
            c += crossing_sign(l) > 0;
        return c;
    }
    int n_minus() const { return size() - n_plus(); }
    int writhe() const { return n_plus() - n_minus(); }

    BraidWord operator*(const BraidWord& o) const
    {
        BraidWord r(std::max(strands, o.strands), letters);
        r.letters.insert(r.letters.end(), o.letters.begin(), o.letters.end());
        return r;
    }

    BraidWord power(int k) const
    {
        BraidWord base = k >= 0 ? *this : inverse();
        BraidWord r(strands, {});
        for (int t = 0; t < std::abs(k); ++t)
            r.letters.insert(r.letters.end(), base.letters.begin(), base.letters.end());
        return r;
    }

    BraidWord inverse() const
    {
        BraidWord r(strands, {});
        for (auto it = letters.rbegin(); it != letters.rend(); ++it)
            r.letters.push_back({it->gen, -it->exponent});
        return r;
    }

    // Mirror image: every crossing changes sign, positions unchanged.
    BraidWord mirror() const
    {
        BraidWord r = *this;
        for (auto& l : r.letters)
            l.exponent = -l.exponent;
        return r;
    }

    std::string to_string() const
    {
        std::ostringstream os;
        for (std::size_t i = 0; i < letters.size(); ++i)
            os << (i ? " " : "") << "s" << letters[i].gen << (letters[i].exponent < 0 ? "'" : "");
        return os.str();
    }

    bool operator==(const BraidWord&) const = default;
};

inline BraidWord sigma(int gen, int power = 1, int strands = 0)
{
    Letter l{gen, power >= 0 ? 1 : -1};
    return BraidWord(strands ? strands : gen + 1, std::vector<Letter>(std::abs(power), l));
}

// ---------------------------------------------------------------------------
// Resolution tracing

struct Smoothing
{
    std::uint64_t bits = 0;
    Tangle tangle;                  // includes the circle count
    std::vector<int> circle_origins; // 1-based crossing index per circle, ascending
    std::vector<std::int16_t> edge_segment; // per edge slot: arc index, or arcs + circle index

    int arcs() const { return tangle.arcs(); }
};

inline Smoothing resolve(const BraidWord& w, std::uint64_t bits)
{
    const int n = w.strands, N = w.size();
    if (N > 62)
        throw BudgetExceeded("braid word too long for a resolution cube");
    const int E = N * n;
    // Endpoints of every edge slot, as node ids l * n + j.
    std::vector<int> ea(E), eb(E);
    std::vector<char> is_cup(E, 0);
    for (int r = 0; r < N; ++r)
    {
        const Letter& L = w.letters[r];
        bool hor = horizontal_resolution(L, (bits >> r) & 1);
        for (int j = 0; j < n; ++j)
        {
            int e = r * n + j;
            ea[e] = r * n + j;
            eb[e] = (r + 1) * n + j;
        }
        if (hor)
        {
            int i = L.gen; // slots i-1 and i
            ea[r * n + i - 1] = r * n + i - 1;
            eb[r * n + i - 1] = r * n + i;
            ea[r * n + i] = (r + 1) * n + i - 1;
            eb[r * n + i] = (r + 1) * n + i;
            is_cup[r * n + i] = 1;
        }
    }
    const int V = (N + 1) * n;
    std::vector<std::array<int, 2>> adj(V, {-1, -1});
    for (int e = 0; e < E; ++e)
        for (int v : {ea[e], eb[e]})
            adj[v][adj[v][0] < 0 ? 0 : 1] = e;

    auto pos_of = [&](int node) -> int {
        int l = node / n, j = node % n;
        if (l == N)
            return j;
        if (l == 0)
            return 2 * n - 1 - j;
        return -1;
    };
    auto node_of_pos = [&](int p) -> int { return p < n ? N * n + p : 2 * n - 1 - p; };

    std::vector<std::int16_t> seg(E, -1);
    std::vector<std::uint8_t> pairing(2 * n);
    std::vector<std::vector<int>> arc_edges;
    // Arcs: walk from each boundary point (level 0 and N nodes have degree 1
    // unless N = 0, where the single node of a strand is both ends).
    std::vector<char> pos_done(2 * n, 0);
    for (int p = 0; p < 2 * n; ++p)
    {
        if (pos_done[p])
            continue;
        if (N == 0)
        {
            int q = 2 * n - 1 - p;
            pairing[p] = static_cast<std::uint8_t>(q);
            pairing[q] = static_cast<std::uint8_t>(p);
            pos_done[p] = pos_done[q] = 1;
            arc_edges.push_back({});
            continue;
        }
        int v = node_of_pos(p);
        int e = adj[v][0];
        std::vector<int> edges;
        while (true)
        {
            edges.push_back(e);
            v = ea[e] == v ? eb[e] : ea[e];
            if (pos_of(v) >= 0)
                break;
            e = adj[v][0] == e ? adj[v][1] : adj[v][0];
        }
        int q = pos_of(v);
        pairing[p] = static_cast<std::uint8_t>(q);
        pairing[q] = static_cast<std::uint8_t>(p);
        pos_done[p] = pos_done[q] = 1;
        arc_edges.push_back(std::move(edges));
    }
    Tangle t(pairing);
    // Arc indices follow the tangle's own ordering by smaller endpoint;
    // arc_edges was filled in order of the smaller endpoint already.
    for (std::size_t k = 0; k < arc_edges.size(); ++k)
        for (int e : arc_edges[k])
            seg[e] = static_cast<std::int16_t>(k);
    // Circles.
    struct Circle
    {
        int origin;
        std::vector<int> edges;
    };
    std::vector<Circle> circles;
    for (int e0 = 0; e0 < E; ++e0)
    {
        if (seg[e0] >= 0)
            continue;
        Circle c{1 << 30, {}};
        int e = e0, v = ea[e0];
        do
        {
            c.edges.push_back(e);
            seg[e] = 0; // provisional mark
            if (is_cup[e])
                c.origin = std::min(c.origin, e / n + 1);
            v = ea[e] == v ? eb[e] : ea[e];
            e = adj[v][0] == e ? adj[v][1] : adj[v][0];
        } while (e != e0);
        circles.push_back(std::move(c));
    }
    std::sort(circles.begin(), circles.end(),
              [](const Circle& a, const Circle& b) { return a.origin < b.origin; });
    Smoothing s;
    s.bits = bits;
    for (std::size_t c = 0; c < circles.size(); ++c)
    {
        s.circle_origins.push_back(circles[c].origin);
        for (int e : circles[c].edges)
            seg[e] = static_cast<std::int16_t>(t.arcs() + c);
    }
    s.tangle = t.with_circles(static_cast<std::uint32_t>(circles.size()));
    s.edge_segment = std::move(seg);
    return s;
}

// Saddle cobordism between two resolutions differing at crossing r.
inline DottedMorphism saddle(const BraidWord& w, const Smoothing& src, const Smoothing& tgt, int r)
{
    const int n = w.strands;
    SegmentLayout L(src.tangle, tgt.tangle);
    auto dom_seg = [&](int s) { return s < L.b ? L.dom_arc(s) : L.dom_circle(s - L.b); };
    auto cod_seg = [&](int s) { return s < L.b ? L.cod_arc(s) : L.cod_circle(s - L.b); };
    std::vector<int> parent(L.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    int i = w.letters[r].gen;
    int hub = dom_seg(src.edge_segment[r * n + i - 1]);
    for (int e = 0; e < static_cast<int>(src.edge_segment.size()); ++e)
    {
        int a = dom_seg(src.edge_segment[e]), b = cod_seg(tgt.edge_segment[e]);
        if (e / n == r && (e % n == i - 1 || e % n == i))
        {
            unite(a, hub);
            unite(b, hub);
        }
        else
            unite(a, b);
    }
    CobGenerator g{src.tangle, tgt.tangle, {}};
    std::map<int, int> comp_of_root;
    for (int s = 0; s < L.size(); ++s)
    {
        auto [it, fresh] = comp_of_root.emplace(find(s), static_cast<int>(g.components.size()));
        if (fresh)
            g.components.push_back({});
        g.components[it->second].segments.push_back(s);
    }
    return normalize(g, 1);
}

inline int ones_below(std::uint64_t bits, int r)
{
    return std::popcount(bits & ((std::uint64_t(1) << r) - 1));
}

inline std::string bits_string(std::uint64_t bits, int N)
{
    std::string s;
    for (int r = 0; r < N; ++r)
        s += ((bits >> r) & 1) ? '1' : '0';
    return s;
}

inline BasedComplex khovanov_complex(const BraidWord& w, std::size_t budget = std::size_t(1) << 22)
{
    const int N = w.size();
    if (N > 40 || (std::uint64_t(1) << N) > budget)
        throw BudgetExceeded("cube of " + std::to_string(N) + " crossings exceeds the budget");
    const int np = w.n_plus(), nm = w.n_minus();
    BasedComplex C;
    std::vector<Smoothing> sm;
    for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << N); ++bits)
    {
        sm.push_back(resolve(w, bits));
        int k = std::popcount(bits);
        C.add_cell(Cell{k - nm, k + np - 2 * nm, sm.back().tangle, bits_string(bits, N),
                        sm.back().circle_origins});
    }
    for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << N); ++bits)
        for (int r = 0; r < N; ++r)
            if (!((bits >> r) & 1))
            {
                std::uint64_t t = bits | (std::uint64_t(1) << r);
                int sign = ones_below(bits, r) % 2 ? -1 : 1;
                C.add_entry(static_cast<CellId>(bits), static_cast<CellId>(t),
                            saddle(w, sm[bits], sm[t], r) * sign);
            }
    return C;
}

// ---------------------------------------------------------------------------
// Enhanced words

struct EnhancedWord
{
    std::vector<std::int8_t> bit;
    std::vector<std::int8_t> sup; // 0 plain, -1 for x, +1 for 1

    int size() const { return static_cast<int>(bit.size()); }

    std::string to_string() const
    {
        std::string s;
        for (int i = 0; i < size(); ++i)
        {
            if (i)
                s += ' ';
            s += bit[i] ? '1' : '0';
            if (sup[i] < 0)
                s += "^x";
            else if (sup[i] > 0)
                s += "^1";
        }
        return s;
    }

    // Inverse of to_string; also accepts "-" for an explicit plain symbol.
    static EnhancedWord parse(const std::string& text)
    {
        EnhancedWord w;
        std::istringstream is(text);
        std::string tok;
        while (is >> tok)
        {
            if (tok.empty() || (tok[0] != '0' && tok[0] != '1'))
                throw ParseError("bad enhanced-word symbol '" + tok + "'");
            w.bit.push_back(static_cast<std::int8_t>(tok[0] - '0'));
            std::string rest = tok.substr(1);
            if (rest.empty() || rest == "^-")
                w.sup.push_back(0);
            else if (rest == "^x")
                w.sup.push_back(-1);
            else if (rest == "^1")
                w.sup.push_back(1);
            else
                throw ParseError("bad enhanced-word symbol '" + tok + "'");
        }
        return w;
    }

    bool operator==(const EnhancedWord&) const = default;
};

// Leading plain 1 symbols before the first 0.
inline int O(const EnhancedWord& w)
{
    int c = 0;
    for (int i = 0; i < w.size() && w.bit[i] == 1; ++i)
        c += w.sup[i] == 0;
    return c;
}

// The 1-based index at which two adjacent words change between 0 and 1.
inline int L(const EnhancedWord& a, const EnhancedWord& b)
{
    if (a.size() != b.size())
        throw InvariantViolation("L: words of different length");
    int idx = 0;
    for (int i = 0; i < a.size(); ++i)
        if (a.bit[i] != b.bit[i])
        {
            if (idx)
                throw InvariantViolation("L: words differ in more than one position");
            idx = i + 1;
        }
    if (!idx)
        throw InvariantViolation("L: words do not differ in any position");
    return idx;
}

inline EnhancedWord enhanced_word(std::uint64_t bits, int N, const std::vector<int>& origins,
                                  const std::vector<int>& labels)
{
    EnhancedWord w;
    w.bit.resize(N);
    w.sup.assign(N, 0);
    for (int r = 0; r < N; ++r)
        w.bit[r] = (bits >> r) & 1;
    for (std::size_t c = 0; c < origins.size(); ++c)
        w.sup[origins[c] - 1] = static_cast<std::int8_t>(labels[c]);
    return w;
}

// Label vector for mask t over c circles; first circle is the most
// significant bit, and a set bit means +1.
inline std::vector<int> labels_of_mask(std::uint64_t t, int c)
{
    std::vector<int> l(c);
    for (int i = 0; i < c; ++i)
        l[i] = ((t >> (c - 1 - i)) & 1) ? 1 : -1;
    return l;
}

inline std::uint64_t mask_of_labels(const std::vector<int>& l)
{
    std::uint64_t t = 0;
    for (int x : l)
        t = (t << 1) | (x > 0 ? 1 : 0);
    return t;
}

// ---------------------------------------------------------------------------
// Generic delooping

inline BasedComplex deloop(const BasedComplex& C)
{
    BasedComplex D;
    std::vector<CellId> first(C.size());
    for (CellId a = 0; a < static_cast<CellId>(C.size()); ++a)
    {
        const Cell& cell = C.cell(a);
        int c = static_cast<int>(cell.object.circles());
        if (c > 20)
            throw BudgetExceeded("too many circles to deloop");
        first[a] = static_cast<CellId>(D.size());
        bool braid_label = !cell.circle_origins.empty() || cell.label.find_first_not_of("01") == std::string::npos;
        for (std::uint64_t t = 0; t < (std::uint64_t(1) << c); ++t)
        {
            auto labels = labels_of_mask(t, c);
            int shift = std::accumulate(labels.begin(), labels.end(), 0);
            std::string lab = cell.label;
            if (c > 0 && braid_label && static_cast<int>(cell.circle_origins.size()) == c)
            {
                std::uint64_t bits = 0;
                for (std::size_t r = 0; r < lab.size(); ++r)
                    bits |= std::uint64_t(lab[r] == '1') << r;
                lab = enhanced_word(bits, static_cast<int>(lab.size()), cell.circle_origins, labels).to_string();
            }
            else if (c > 0)
            {
                lab += "|";
                for (int x : labels)
                    lab += x > 0 ? '+' : '-';
            }
            else if (braid_label)
            {
                std::uint64_t bits = 0;
                for (std::size_t r = 0; r < lab.size(); ++r)
                    bits |= std::uint64_t(lab[r] == '1') << r;
                lab = enhanced_word(bits, static_cast<int>(lab.size()), {}, {}).to_string();
            }
            D.add_cell(Cell{cell.hdeg, cell.qshift + shift, cell.object.with_circles(0), lab, {}});
        }
    }
    for (CellId a = 0; a < static_cast<CellId>(C.size()); ++a)
    {
        int ca = static_cast<int>(C.object(a).circles());
        for (auto& [b, f] : C.row(a))
        {
            int cb = static_cast<int>(C.object(b).circles());
            for (std::uint64_t s = 0; s < (std::uint64_t(1) << ca); ++s)
            {
                auto ls = labels_of_mask(s, ca);
                for (std::uint64_t t = 0; t < (std::uint64_t(1) << cb); ++t)
                    D.add_entry(first[a] + static_cast<CellId>(s), first[b] + static_cast<CellId>(t),
                                cap_circles(f, ls, labels_of_mask(t, cb)));
            }
        }
    }
    return D;
}

// ---------------------------------------------------------------------------
// Implicit delooped cubes.
//
// A cell is a pair (bits, mask): a resolution and a label mask over its
// circles.  CubeCommon holds everything that only needs the trace of a
// resolution; EnhancedCube stores all traces and indexes cells densely,
// LazyEnhancedCube resolves on demand and packs (bits, mask) into the id.

struct TraceRef
{
    const std::int16_t* seg = nullptr;          // segment per edge slot
    const std::int8_t* origin_circle = nullptr; // circle whose origin is crossing r, or -1
    const std::int16_t* rep = nullptr;          // one edge slot on each segment (arcs, then circles)
    int circles = 0;
    std::uint32_t tangle = 0;
};

template <class Derived>
class CubeCommon
{
public:
    const BraidWord& word() const { return w_; }
    int crossings() const { return N_; }

    int hdeg(CellId c) const { return std::popcount(self().bits_of(c)) - w_.n_minus(); }

    int qshift(CellId c) const
    {
        std::uint64_t bits = self().bits_of(c);
        int nc = self().ref(bits).circles;
        int k = std::popcount(bits);
        int ones = std::popcount(self().mask_of(c));
        return k + w_.n_plus() - 2 * w_.n_minus() + 2 * ones - nc;
    }

    const Tangle& object(CellId c) const { return tangles_[self().ref(self().bits_of(c)).tangle]; }

    int circles(std::uint64_t bits) const { return self().ref(bits).circles; }

    // Circle origins (1-based crossing indices) of a resolution.
    std::vector<int> origins(std::uint64_t bits) const
    {
        TraceRef t = self().ref(bits);
        std::vector<int> o(t.circles);
        for (int r = 0; r < N_; ++r)
            if (int cc = t.origin_circle[r]; cc >= 0)
                o[cc] = r + 1;
        return o;
    }

    EnhancedWord enhanced(CellId c) const
    {
        std::uint64_t bits = self().bits_of(c);
        return enhanced_word(bits, N_, origins(bits), labels_of_mask(self().mask_of(c), circles(bits)));
    }

    std::string label(CellId c) const { return enhanced(c).to_string(); }

    // Allocation-free view of the enhanced word of c: bit[r] and sup[r].
    void symbols(CellId c, std::int8_t* bit, std::int8_t* sup) const
    {
        std::uint64_t bits = self().bits_of(c), mask = self().mask_of(c);
        TraceRef t = self().ref(bits);
        for (int r = 0; r < N_; ++r)
        {
            bit[r] = (bits >> r) & 1;
            int cc = t.origin_circle[r];
            sup[r] = cc < 0 ? 0 : (((mask >> (t.circles - 1 - cc)) & 1) ? 1 : -1);
        }
    }

    // Inverse of symbols(); no_cell if the superscripts do not fit.
    CellId find(const std::int8_t* bit, const std::int8_t* sup) const
    {
        std::uint64_t bits = 0;
        for (int r = 0; r < N_; ++r)
            bits |= std::uint64_t(bit[r]) << r;
        TraceRef t = self().ref(bits);
        std::uint64_t mask = 0;
        for (int r = 0; r < N_; ++r)
        {
            int cc = t.origin_circle[r];
            if ((cc >= 0) != (sup[r] != 0))
                return no_cell;
            if (cc >= 0 && sup[r] > 0)
                mask |= std::uint64_t(1) << (t.circles - 1 - cc);
        }
        return self().id(bits, mask);
    }

    CellId find(const EnhancedWord& w) const
    {
        if (w.size() != N_)
            return no_cell;
        return find(w.bit.data(), w.sup.data());
    }

    // Fast entry rule.  Calls f(target, unit, invertible) for every nonzero
    // differential entry out of c; every such entry is +-1 times a single
    // generator and unit is that sign.
    template <class F>
    void for_each_entry(CellId c, F&& f) const
    {
        std::uint64_t bits = self().bits_of(c), mask = self().mask_of(c);
        for (int r = 0; r < N_; ++r)
            if (!((bits >> r) & 1))
                entries_at(bits, mask, r, [&](std::uint64_t tb, std::uint64_t tm, int coeff, bool inv) {
                    f(self().id(tb, tm), coeff, inv);
                });
    }

    // Full entries as cobordisms.
    template <class F>
    void for_each_out(CellId c, F&& f) const
    {
        std::uint64_t bits = self().bits_of(c), mask = self().mask_of(c);
        for (int r = 0; r < N_; ++r)
            if (!((bits >> r) & 1))
                entries_at(bits, mask, r, [&](std::uint64_t tb, std::uint64_t tm, int, bool) {
                    f(self().id(tb, tm), morphism(bits, mask, tb, tm, r));
                });
    }

    // The delooped entry built directly: untouched arcs become identity
    // strips, untouched circles are capped on both sides (a scalar 0 or 1),
    // and the saddle component is a genus-0 piece carrying one dot per
    // x-labelled source circle and per 1-labelled target circle on it.
    DottedMorphism morphism(std::uint64_t bits, std::uint64_t mask, std::uint64_t tb, std::uint64_t tm,
                            int r) const
    {
        const TraceRef S = self().ref(bits), T = self().ref(tb);
        const Tangle& dom = tangles_[S.tangle];
        const Tangle& cod = tangles_[T.tangle];
        const int bs = dom.arcs(), cs = S.circles, ct = T.circles;
        const int gen = w_.letters[r].gen;
        const int e0 = r * n_ + gen - 1, e1 = r * n_ + gen;
        auto src_plus = [&](int i) { return ((mask >> (cs - 1 - i)) & 1) != 0; };
        auto tgt_plus = [&](int i) { return ((tm >> (ct - 1 - i)) & 1) != 0; };
        // Untouched circles must keep their label.
        for (int i = 0; i < cs; ++i)
        {
            int sg = bs + i;
            if (sg == S.seg[e0] || sg == S.seg[e1])
                continue;
            if (src_plus(i) != tgt_plus(T.seg[S.rep[sg]] - bs))
                return DottedMorphism(dom, cod);
        }
        CobGenerator g{dom, cod, {}};
        CobComponent K;
        auto in_k = [&](int sg, const std::int16_t* seg) { return sg == seg[e0] || sg == seg[e1]; };
        for (int a = 0; a < bs; ++a)
            if (in_k(a, S.seg))
                K.segments.push_back(a);
            else
                g.components.push_back({{a, bs + T.seg[S.rep[a]]}, 0, 0});
        for (int b = 0; b < bs; ++b)
            if (in_k(b, T.seg))
                K.segments.push_back(bs + b);
        for (int i = 0; i < cs; ++i)
            if (in_k(bs + i, S.seg) && !src_plus(i))
                ++K.dots;
        for (int i = 0; i < ct; ++i)
            if (in_k(bs + i, T.seg) && tgt_plus(i))
                ++K.dots;
        const int sign = ones_below(bits, r) % 2 ? -1 : 1;
        if (K.segments.empty())
        {
            if (evaluate_closed(0, K.dots) == 0)
                return DottedMorphism(dom, cod);
        }
        else
            g.components.push_back(std::move(K));
        return normalize(g, sign);
    }

    // The same entry through the general route: saddle, then conjugation
    // by the delooping maps.
    DottedMorphism morphism_reference(std::uint64_t bits, std::uint64_t mask, std::uint64_t tb,
                                      std::uint64_t tm, int r) const
    {
        Smoothing s = resolve(w_, bits), t = resolve(w_, tb);
        int sign = ones_below(bits, r) % 2 ? -1 : 1;
        return cap_circles(saddle(w_, s, t, r) * sign, labels_of_mask(mask, s.tangle.circles()),
                           labels_of_mask(tm, t.tangle.circles()));
    }

    DottedMorphism entry(CellId from, CellId to) const
    {
        std::uint64_t b0 = self().bits_of(from), b1 = self().bits_of(to);
        std::uint64_t diff = b1 ^ b0;
        if (std::popcount(diff) != 1 || (b1 & diff) == 0)
            return DottedMorphism(object(from), object(to));
        return morphism(b0, self().mask_of(from), b1, self().mask_of(to), std::countr_zero(diff));
    }

protected:
    explicit CubeCommon(BraidWord w) : w_(std::move(w)), N_(w_.size()), n_(w_.strands), E_(N_ * n_) {}

    std::uint32_t intern(const Tangle& t)
    {
        auto [it, fresh] = tangle_ids_.emplace(t.pairing(), static_cast<std::uint32_t>(tangles_.size()));
        if (fresh)
            tangles_.push_back(t.with_circles(0));
        return it->second;
    }

    BraidWord w_;
    int N_ = 0, n_ = 1, E_ = 0;
    std::vector<Tangle> tangles_;
    std::map<std::vector<std::uint8_t>, std::uint32_t> tangle_ids_;

private:
    const Derived& self() const { return static_cast<const Derived&>(*this); }

    template <class F>
    void entries_at(std::uint64_t bits, std::uint64_t mask, int r, F&& f) const
    {
        const std::uint64_t tb = bits | (std::uint64_t(1) << r);
        const TraceRef S = self().ref(bits), T = self().ref(tb);
        const int cs = S.circles, ct = T.circles;
        const std::int16_t* ss = S.seg;
        const std::int16_t* ts = T.seg;
        const int bs = tangles_[S.tangle].arcs();
        const int gen = w_.letters[r].gen;
        // The saddle component consists of the segments through the two
        // crossing slots; every other segment passes unchanged to the target.
        const int a0 = ss[r * n_ + gen - 1], a1 = ss[r * n_ + gen];
        const int b0 = ts[r * n_ + gen - 1], b1 = ts[r * n_ + gen];
        std::uint64_t src_in = 0, tgt_in = 0; // circles inside the saddle component
        int arcs_src = 0, arcs_tgt = 0;
        for (int a : {a0, a1})
        {
            if (a < bs)
                ++arcs_src;
            else
                src_in |= std::uint64_t(1) << (a - bs);
        }
        if (a0 == a1 && a0 < bs)
            arcs_src = 1;
        for (int b : {b0, b1})
        {
            if (b < bs)
                ++arcs_tgt;
            else
                tgt_in |= std::uint64_t(1) << (b - bs);
        }
        if (b0 == b1 && b0 < bs)
            arcs_tgt = 1;
        const bool open = arcs_src + arcs_tgt > 0;
        // Source labels: bit (cs-1-i) of mask is circle i.  Untouched
        // circles keep their label on the matching target circle.
        int dots = 0;
        std::uint64_t base_mask = 0;
        for (int i = 0; i < cs; ++i)
        {
            bool plus = (mask >> (cs - 1 - i)) & 1;
            if ((src_in >> i) & 1)
                dots += plus ? 0 : 1;
            else if (plus)
                base_mask |= std::uint64_t(1) << (ct - 1 - (ts[S.rep[bs + i]] - bs));
        }
        int tin[2], ntin = 0;
        for (int i = 0; i < ct; ++i)
            if ((tgt_in >> i) & 1)
                tin[ntin++] = i;
        const int sign = ones_below(bits, r) % 2 ? -1 : 1;
        const bool same_tangle = S.tangle == T.tangle;
        for (std::uint32_t choice = 0; choice < (1u << ntin); ++choice)
        {
            int d = dots + std::popcount(choice);
            if (open ? d > 1 : d != 1)
                continue;
            std::uint64_t tm = base_mask;
            for (int k = 0; k < ntin; ++k)
                if ((choice >> k) & 1)
                    tm |= std::uint64_t(1) << (ct - 1 - tin[k]);
            // A closed saddle component leaves identity strips on every arc.
            bool inv = !open || (d == 0 && arcs_src == 1 && arcs_tgt == 1 && same_tangle);
            f(tb, tm, sign, inv);
        }
    }
};

// All resolutions traced up front; cells numbered densely in the order of
// deloop(khovanov_complex(w)): all masks of bits 0, then of bits 1, ...
class EnhancedCube : public CubeCommon<EnhancedCube>
{
public:
    explicit EnhancedCube(BraidWord w, std::size_t budget = std::size_t(1) << 24)
        : CubeCommon<EnhancedCube>(std::move(w))
    {
        if (N_ > 24)
            throw BudgetExceeded("dense enhanced cube limited to 24 crossings");
        const std::uint64_t nb = std::uint64_t(1) << N_;
        offset_.resize(nb + 1);
        circles_.resize(nb);
        tangle_id_.resize(nb);
        seg_.resize(nb * E_);
        origin_circle_.assign(nb * N_, -1);
        R_ = N_ + n_;
        rep_.assign(nb * R_, 0);
        std::uint64_t total = 0;
        for (std::uint64_t bits = 0; bits < nb; ++bits)
        {
            Smoothing s = resolve(w_, bits);
            offset_[bits] = total;
            int c = static_cast<int>(s.tangle.circles());
            circles_[bits] = static_cast<std::uint8_t>(c);
            total += std::uint64_t(1) << c;
            if (total > budget)
                throw BudgetExceeded("enhanced cube has more than " + std::to_string(budget) + " cells");
            tangle_id_[bits] = intern(s.tangle);
            std::copy(s.edge_segment.begin(), s.edge_segment.end(), seg_.begin() + bits * E_);
            for (int cc = 0; cc < c; ++cc)
                origin_circle_[bits * N_ + s.circle_origins[cc] - 1] = static_cast<std::int8_t>(cc);
            for (int e = E_ - 1; e >= 0; --e)
                rep_[bits * R_ + s.edge_segment[e]] = static_cast<std::int16_t>(e);
        }
        offset_[nb] = total;
    }

    std::size_t size() const { return offset_.back(); }

    CellId id(std::uint64_t bits, std::uint64_t mask) const { return static_cast<CellId>(offset_[bits] + mask); }

    std::uint64_t bits_of(CellId c) const
    {
        auto it = std::upper_bound(offset_.begin(), offset_.end(), static_cast<std::uint64_t>(c));
        return static_cast<std::uint64_t>(it - offset_.begin()) - 1;
    }
    std::uint64_t mask_of(CellId c) const { return static_cast<std::uint64_t>(c) - offset_[bits_of(c)]; }

    TraceRef ref(std::uint64_t bits) const
    {
        return TraceRef{&seg_[bits * E_], &origin_circle_[bits * N_], &rep_[bits * R_], circles_[bits],
                        tangle_id_[bits]};
    }

private:
    std::vector<std::uint64_t> offset_;
    std::vector<std::uint8_t> circles_;
    std::vector<std::uint32_t> tangle_id_;
    std::vector<std::int16_t> seg_;
    std::vector<std::int8_t> origin_circle_;
    std::vector<std::int16_t> rep_;
    int R_ = 1;
};

// Resolutions traced on demand.  Ids pack (bits << mask_bits_) | mask, with
// the mask taking the 63 - N bits left over by the N crossing bits, so only
// cells that are actually visited cost anything.  Not thread-safe (mutable
// cache).
class LazyEnhancedCube : public CubeCommon<LazyEnhancedCube>
{
public:
    explicit LazyEnhancedCube(BraidWord w) : CubeCommon<LazyEnhancedCube>(std::move(w))
    {
        if (N_ > 40)
            throw BudgetExceeded("lazy enhanced cube limited to 40 crossings");
        mask_bits_ = 63 - N_;
    }

    CellId id(std::uint64_t bits, std::uint64_t mask) const
    {
        return static_cast<CellId>((bits << mask_bits_) | mask);
    }
    std::uint64_t bits_of(CellId c) const { return static_cast<std::uint64_t>(c) >> mask_bits_; }
    std::uint64_t mask_of(CellId c) const
    {
        return static_cast<std::uint64_t>(c) & ((std::uint64_t(1) << mask_bits_) - 1);
    }

    TraceRef ref(std::uint64_t bits) const
    {
        auto it = cache_.find(bits);
        if (it == cache_.end())
        {
            Smoothing s = resolve(w_, bits);
            Trace t;
            t.circles = static_cast<int>(s.tangle.circles());
            if (t.circles >= mask_bits_)
                throw BudgetExceeded("resolution with too many circles for the lazy cube");
            t.tangle = const_cast<LazyEnhancedCube*>(this)->intern(s.tangle);
            t.seg = s.edge_segment;
            t.origin_circle.assign(N_, -1);
            t.rep.assign(s.tangle.arcs() + t.circles + 1, 0);
            for (int cc = 0; cc < t.circles; ++cc)
                t.origin_circle[s.circle_origins[cc] - 1] = static_cast<std::int8_t>(cc);
            for (int e = E_ - 1; e >= 0; --e)
                t.rep[s.edge_segment[e]] = static_cast<std::int16_t>(e);
            it = cache_.emplace(bits, std::move(t)).first;
        }
        const Trace& t = it->second;
        return TraceRef{t.seg.data(), t.origin_circle.data(), t.rep.data(), t.circles, t.tangle};
    }

    std::size_t traced() const { return cache_.size(); }

private:
    struct Trace
    {
        std::vector<std::int16_t> seg;
        std::vector<std::int8_t> origin_circle;
        std::vector<std::int16_t> rep;
        int circles = 0;
        std::uint32_t tangle = 0;
    };
    mutable std::unordered_map<std::uint64_t, Trace> cache_;
    int mask_bits_ = 20;
};

} // namespace khmorse

#endif
