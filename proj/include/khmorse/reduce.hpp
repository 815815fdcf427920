/*
 * reduce.hpp
 *
 * Reduction of the twist parameters of links D((s1 s2)^k, s1^m, T) to a
 * finite set, and a scanner that computes torsion over windows of 3-braid
 * families.
 *
 * A DiagramContext fixes a 3-input diagram D (6, 4 and 2n boundary points)
 * and a braid T on the third input.  The bound functions v1, v2, w1, w2, g
 * and h are linear in the parameters and read the support of the delooped
 * cube of T.  reduce_parameters moves (i, j, k, m) along isomorphisms of
 * homology groups until |m| and k drop below those bounds, recording each
 * step.  Window sizes a, b say that the isomorphism must hold for every
 * (i + c, j + d) with 0 <= c <= a, 0 <= d <= b.
 */
#ifndef KHMORSE_REDUCE_HPP
#define KHMORSE_REDUCE_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <future>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "pipeline.hpp"

namespace khmorse
{

using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& r)
{
    return r.denominator() == 1 ? std::to_string(r.numerator())
                                : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

struct DiagramContext
{
    PlanarArcDiagram D;
    BraidWord T; // ignored (and required empty) when the third input has no points
    int s = 0;
    int h_min = 0, h_max = 0; // homological support of the delooped cube of T
    int q_min = 0, q_max = 0; // its internal degree shifts

    static DiagramContext make(const PlanarArcDiagram& D, const BraidWord& T = BraidWord(1, {}))
    {
        if (D.arity() != 3 || D.inputs()[0] != 6 || D.inputs()[1] != 4)
            throw InvariantViolation("reduction needs a 3-input diagram with 6 and 4 points on its first two inputs",
                                     "bad_diagram");
        DiagramContext c;
        c.D = D;
        c.T = T;
        c.s = s_value(D);
        if (D.inputs()[2] == 0)
        {
            if (T.size() != 0)
                throw InvariantViolation("third input is empty but T has crossings", "boundary_mismatch");
            return c;
        }
        if (2 * T.strands != D.inputs()[2])
            throw InvariantViolation("T does not fit the third input", "boundary_mismatch");
        BasedComplex C = deloop(khovanov_complex(T));
        bool first = true;
        for (std::size_t x = 0; x < C.size(); ++x)
        {
            const Cell& cell = C.cell(static_cast<CellId>(x));
            if (first)
            {
                c.h_min = c.h_max = cell.hdeg;
                c.q_min = c.q_max = cell.qshift;
                first = false;
            }
            c.h_min = std::min(c.h_min, cell.hdeg);
            c.h_max = std::max(c.h_max, cell.hdeg);
            c.q_min = std::min(c.q_min, cell.qshift);
            c.q_max = std::max(c.q_max, cell.qshift);
        }
        return c;
    }

    bool third_input_empty() const { return D.inputs()[2] == 0; }

    // flip(D) with flip(T^!), the context of the mirror branch.
    DiagramContext mirrored() const
    {
        return make(flip(D), third_input_empty() ? T : flip(T.mirror()));
    }

    void check() const
    {
        DiagramContext fresh = make(D, T);
        if (fresh.s != s || fresh.h_min != h_min || fresh.h_max != h_max || fresh.q_min != q_min ||
            fresh.q_max != q_max)
            throw InvariantViolation("stale diagram context", "stale_context");
    }

    // Crossings of T split by sign; T' of the merge adds s1^m to them.
    int t_plus() const { return third_input_empty() ? 0 : T.n_plus(); }
    int t_minus() const { return third_input_empty() ? 0 : T.n_minus(); }
};

// Built-in context: closures of (s1 s2)^k s1^m.
inline DiagramContext omega4_context() { return DiagramContext::make(omega4_diagram()); }

// Built-in context: closures of (s1 s2)^k s2^m.
inline DiagramContext omega5_context() { return DiagramContext::make(omega5_diagram()); }

inline int v1(int i, int j, int k, int m, const DiagramContext& c)
{
    return -3 * i + 2 * j + 4 * k + 3 * m - 2 * c.s + 3 * c.h_min - 2 * c.q_max - 7;
}

inline int v2(int i, int j, int k, int m, const DiagramContext& c)
{
    return -3 * i + 2 * j + 4 * k + 2 * m + 2 * c.s + 3 * c.h_max - 2 * c.q_min + 4;
}

inline int w1(int i, int j, int k, int m, const DiagramContext& c)
{
    return -3 * i + 2 * j + 4 * k + 2 * m - 2 * c.s + 3 * c.h_min - 2 * c.q_max - 6;
}

// The q_min coefficient is 1 here, unlike v2.
inline int w2(int i, int j, int k, int m, const DiagramContext& c)
{
    return -3 * i + 2 * j + 4 * k + 3 * m + 2 * c.s + 3 * c.h_max - c.q_min + 5;
}

inline int g_bound(int a, int b, const DiagramContext& c)
{
    return 4 * c.s + 3 * (c.h_max - c.h_min) + 2 * (c.q_max - c.q_min) + 3 * a + 2 * b + 14;
}

// Homological support of the cube of T' = s1^m merged with T.
struct MergedSpan
{
    int h_min = 0, h_max = 0;
};

inline MergedSpan merged_span(int m, const DiagramContext& c)
{
    // s1 is a negative crossing, so s1^m has m negative crossings for m > 0.
    return {-(c.t_minus() + std::max(0, m)), c.t_plus() + std::max(0, -m)};
}

inline Rational h_bound(int a, const MergedSpan& sp)
{
    return Rational(3 * (sp.h_max - sp.h_min + a), 4) + Rational(8);
}

// Homology of D((s1 s2)^k, s1^m, T), assembled in the diagram.
inline BigradedHomology link_homology(const DiagramContext& c, int k, int m, const PipelineOptions& opt = {})
{
    BraidWord twist = (sigma(1, 1, 3) * sigma(2, 1, 3)).power(k);
    return diagram_homology(c.D, {twist, sigma(1, m, 2), c.T}, opt);
}

struct ReductionParams
{
    int i = 0, j = 0, k = 0, m = 0;
    int a = 0, b = 0;

    bool operator==(const ReductionParams&) const = default;
};

struct ReductionStep
{
    std::string rule; // mirror, unmirror, v1, v2, w1, w2, merge, twist_high, twist_low
    ReductionParams after;
    bool guard_holds = true; // false when a fallback branch ran without its own condition
};

struct Reduction
{
    ReductionParams input;
    ReductionParams output; // window sizes as in the input
    std::vector<ReductionStep> trace;
};

namespace detail
{

// Extremes of f(i + c, j + d) over the window; f is linear so corners suffice.
template <class F>
int window_min(F f, int i, int j, int a, int b)
{
    return std::min({f(i, j), f(i + a, j), f(i, j + b), f(i + a, j + b)});
}

template <class F>
int window_max(F f, int i, int j, int a, int b)
{
    return std::max({f(i, j), f(i + a, j), f(i, j + b), f(i + a, j + b)});
}

inline void reduce_nonnegative(ReductionParams& p, const DiagramContext& c, std::vector<ReductionStep>& trace)
{
    const int g = g_bound(p.a, p.b, c);
    while (p.m >= g)
    {
        int k = p.k, m = p.m;
        auto f1 = [&](int i, int j) { return v1(i, j + 2, k, m - 2, c); };
        auto f2 = [&](int i, int j) { return v2(i + 2, j + 6, k, m - 2, c); };
        if (window_min(f1, p.i, p.j, p.a, p.b) >= 0)
        {
            p.j += 2;
            p.m -= 2;
            trace.push_back({"v1", p, true});
        }
        else
        {
            bool ok = window_max(f2, p.i, p.j, p.a, p.b) <= 0;
            p.i += 2;
            p.j += 6;
            p.m -= 2;
            trace.push_back({"v2", p, ok});
        }
    }
    while (p.m <= -g)
    {
        int k = p.k, m = p.m;
        auto f1 = [&](int i, int j) { return w1(i - 2, j - 6, k, m + 2, c); };
        auto f2 = [&](int i, int j) { return w2(i, j - 2, k, m + 2, c); };
        if (window_min(f1, p.i, p.j, p.a, p.b) >= 0)
        {
            p.i -= 2;
            p.j -= 6;
            p.m += 2;
            trace.push_back({"w1", p, true});
        }
        else
        {
            bool ok = window_max(f2, p.i, p.j, p.a, p.b) <= 0;
            p.j -= 2;
            p.m += 2;
            trace.push_back({"w2", p, ok});
        }
    }
    MergedSpan sp = merged_span(p.m, c);
    trace.push_back({"merge", p, true});
    const Rational h = h_bound(p.a, sp);
    while (Rational(p.k) >= h)
    {
        // floor(4(k - 3) / 3) with k - 3 >= 0 here, since h >= 8.
        int lowered = sp.h_max - (4 * (p.k - 3)) / 3;
        if (p.i > lowered)
        {
            p.j += 6;
            p.k -= 3;
            trace.push_back({"twist_high", p, true});
        }
        else
        {
            bool ok = p.i + p.a + 4 < sp.h_min - 1;
            p.i += 4;
            p.j += 12;
            p.k -= 3;
            trace.push_back({"twist_low", p, ok});
        }
    }
}

} // namespace detail

// Parameter reduction.  For k < 0 the link is mirrored, reduced with the
// window widened by one homological degree, and mirrored back.
inline Reduction reduce_parameters(const ReductionParams& in, const DiagramContext& c)
{
    if (in.a < 0 || in.b < 0)
        throw InvariantViolation("window sizes must be nonnegative", "bad_window");
    Reduction r;
    r.input = in;
    if (in.k < 0)
    {
        ReductionParams p{-in.i - in.a, -in.j - in.b, -in.k, -in.m, in.a + 1, in.b};
        r.trace.push_back({"mirror", p, true});
        detail::reduce_nonnegative(p, c.mirrored(), r.trace);
        r.output = {-p.i - in.a, -p.j - in.b, -p.k, -p.m, in.a, in.b};
        r.trace.push_back({"unmirror", r.output, true});
        return r;
    }
    ReductionParams p = in;
    detail::reduce_nonnegative(p, c, r.trace);
    r.output = p;
    return r;
}

struct IndexSets
{
    int m_bound = 0;           // M = {t : |t| < m_bound}
    Rational k_low, k_high;    // the literal K is the open interval (k_low, k_high)
    std::vector<int> M;
    std::vector<int> K;        // integers of (k_low, k_high)
    Rational reach_low, reach_high;
    std::vector<int> K_reach;  // integers of (reach_low, reach_high): every possible k2
};

// The literal K is {t : h(a+1, C') < t < h(a, C')} with C' from m = max M;
// since h grows with a it is always empty.  K_reach is the set the
// reduction actually lands in: k >= 0 stops below h(a, C') and the mirror
// branch stops above -h(a+1, C').
inline IndexSets index_sets(int a, int b, const DiagramContext& c)
{
    IndexSets s;
    s.m_bound = g_bound(a + 1, b, c);
    for (int t = -s.m_bound + 1; t < s.m_bound; ++t)
        s.M.push_back(t);
    int m_max = s.m_bound - 1;
    // The mirror context has the same spans, so C' of either sign of m_max
    // bounds every merged complex the reduction can meet.
    MergedSpan sp = merged_span(m_max, c), sn = merged_span(-m_max, c);
    if (sn.h_max - sn.h_min > sp.h_max - sp.h_min)
        sp = sn;
    s.k_low = h_bound(a + 1, sp);
    s.k_high = h_bound(a, sp);
    auto integers = [](Rational lo, Rational hi) {
        std::vector<int> out;
        std::int64_t t = boost::rational_cast<std::int64_t>(lo);
        for (t -= 1; Rational(t) < hi; ++t)
            if (Rational(t) > lo)
                out.push_back(static_cast<int>(t));
        return out;
    };
    s.K = integers(s.k_low, s.k_high);
    s.reach_low = -h_bound(a + 1, sp);
    s.reach_high = h_bound(a, sp);
    s.K_reach = integers(s.reach_low, s.reach_high);
    return s;
}

// Families of 3-braids scanned for torsion.
enum class Family
{
    omega0,   // (s1 s2)^(3k)
    omega1,   // (s1 s2)^(3k+1)
    omega2,   // (s1 s2)^(3k+2)
    omega3,   // (s1 s2)^(3k) s1
    omega4,   // (s1 s2)^(3k) s1^(-m), m > 0
    omega5,   // (s1 s2)^(3k) s2^m, m > 0
    torus3,   // (s1 s2)^k
    torus3_s1 // (s1 s2)^(3k+1) s1
};

inline const std::vector<std::pair<std::string, Family>>& family_names()
{
    static const std::vector<std::pair<std::string, Family>> names{
        {"omega0", Family::omega0}, {"omega1", Family::omega1}, {"omega2", Family::omega2},
        {"omega3", Family::omega3}, {"omega4", Family::omega4}, {"omega5", Family::omega5},
        {"torus3", Family::torus3}, {"torus3-s1", Family::torus3_s1}};
    return names;
}

inline std::string family_name(Family f)
{
    for (auto& [n, g] : family_names())
        if (g == f)
            return n;
    return "?";
}

inline Family parse_family(const std::string& s)
{
    for (auto& [n, g] : family_names())
        if (n == s)
            return g;
    throw ParseError("unknown family '" + s + "'", "bad_family");
}

inline bool family_uses_m(Family f) { return f == Family::omega4 || f == Family::omega5; }

inline BraidWord family_braid(Family f, int k, int m)
{
    BraidWord twist = sigma(1, 1, 3) * sigma(2, 1, 3);
    switch (f)
    {
    case Family::omega0:
        return twist.power(3 * k);
    case Family::omega1:
        return twist.power(3 * k + 1);
    case Family::omega2:
        return twist.power(3 * k + 2);
    case Family::omega3:
        return twist.power(3 * k) * sigma(1, 1, 3);
    case Family::omega4:
        return twist.power(3 * k) * sigma(1, -m, 3);
    case Family::omega5:
        return twist.power(3 * k) * sigma(2, m, 3);
    case Family::torus3:
        return twist.power(k);
    case Family::torus3_s1:
        return twist.power(3 * k + 1) * sigma(1, 1, 3);
    }
    return twist;
}

struct ScanWindow
{
    int k_min = 0, k_max = -1;
    int m_min = 1, m_max = 0; // unused by families without m
};

struct ScanRow
{
    std::string family;
    int k = 0, m = 0;
    std::string braid;
    std::vector<BigInt> torsion_orders;
    BigInt max_order = 0;
    bool skipped = false;
    std::string reason;
};

struct TorsionReport
{
    std::vector<ScanRow> rows;
    bool only_Z2 = true;
    int checked = 0;
    int skipped = 0;

    void recount()
    {
        only_Z2 = true;
        checked = skipped = 0;
        for (auto& r : rows)
        {
            if (r.skipped)
            {
                ++skipped;
                continue;
            }
            ++checked;
            for (auto& t : r.torsion_orders)
                only_Z2 = only_Z2 && t == 2;
        }
    }
};

// Homology per braid word, shared between scans over overlapping windows.
class HomologyCache
{
public:
    bool find(const std::string& key, BigradedHomology& out) const
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = table_.find(key);
        if (it == table_.end())
            return false;
        out = it->second;
        return true;
    }
    void put(const std::string& key, const BigradedHomology& H)
    {
        std::lock_guard<std::mutex> lock(mutex_);
        table_.emplace(key, H);
    }
    std::size_t size() const
    {
        std::lock_guard<std::mutex> lock(mutex_);
        return table_.size();
    }

private:
    mutable std::mutex mutex_;
    std::map<std::string, BigradedHomology> table_;
};

inline TorsionReport scan_family(Family f, const ScanWindow& w, const PipelineOptions& opt = {},
                                 HomologyCache* cache = nullptr)
{
    TorsionReport rep;
    for (int k = w.k_min; k <= w.k_max; ++k)
    {
        if (!family_uses_m(f))
        {
            rep.rows.push_back({family_name(f), k, 0, family_braid(f, k, 0).to_string(), {}, 0, false, ""});
            continue;
        }
        for (int m = w.m_min; m <= w.m_max; ++m)
        {
            if (m <= 0)
                throw InvariantViolation(family_name(f) + " needs m > 0", "bad_window");
            rep.rows.push_back({family_name(f), k, m, family_braid(f, k, m).to_string(), {}, 0, false, ""});
        }
    }
    HomologyCache local;
    HomologyCache& memo = cache ? *cache : local;
    PipelineOptions inner = opt;
    inner.threads = 1;
    auto work = [&](ScanRow& row) {
        BigradedHomology H;
        if (!memo.find(row.braid, H))
        {
            try
            {
                H = closure_homology(family_braid(f, row.k, row.m), inner);
            }
            catch (const BudgetExceeded& e)
            {
                row.skipped = true;
                row.reason = e.what();
                return;
            }
            memo.put(row.braid, H);
        }
        row.torsion_orders = torsion_orders(H);
        for (auto& t : row.torsion_orders)
            row.max_order = std::max(row.max_order, t);
    };
    unsigned threads = std::max(1u, opt.threads);
    if (threads == 1)
        for (auto& row : rep.rows)
            work(row);
    else
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::future<void>> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.push_back(std::async(std::launch::async, [&] {
                for (std::size_t r; (r = next++) < rep.rows.size();)
                    work(rep.rows[r]);
            }));
        for (auto& p : pool)
            p.get();
    }
    rep.recount();
    return rep;
}

} // namespace khmorse

#endif
