/*
 * homology.hpp
 *
 * From fully delooped complexes to integral homology.
 *
 * Once every object is the empty tangle, a cell is a copy of Z placed in
 * bidegree (hdeg, qshift) and an entry is the integer its normalized
 * surface evaluates to.  The differential preserves the internal degree, so
 * the integer complex splits into one chain complex per j and each is
 * reduced separately by Smith normal form.
 *
 * The reduction first pivots on unit entries of the sparse matrix (these
 * contribute invariant factor 1 and dominate Khovanov differentials), then
 * runs the dense algorithm on what is left, always pivoting on the entry of
 * smallest absolute value.  Both phases try 64-bit arithmetic with overflow
 * checks and restart on boost::multiprecision::cpp_int when it overflows.
 */
#ifndef KHMORSE_HOMOLOGY_HPP
#define KHMORSE_HOMOLOGY_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "complex.hpp"

namespace khmorse
{

using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Laurent polynomials in q

class LaurentPoly
{
public:
    LaurentPoly() = default;
    LaurentPoly(std::initializer_list<std::pair<const int, std::int64_t>> t)
    {
        for (auto& [e, c] : t)
            add(e, c);
    }

    static LaurentPoly monomial(int e, std::int64_t c = 1)
    {
        LaurentPoly p;
        p.add(e, c);
        return p;
    }

    void add(int e, std::int64_t c)
    {
        if (c == 0)
            return;
        auto& x = terms_[e];
        x = checked_add(x, c);
        if (x == 0)
            terms_.erase(e);
    }

    const std::map<int, std::int64_t>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::int64_t coeff(int e) const
    {
        auto it = terms_.find(e);
        return it == terms_.end() ? 0 : it->second;
    }

    LaurentPoly operator+(const LaurentPoly& o) const
    {
        LaurentPoly r = *this;
        for (auto& [e, c] : o.terms_)
            r.add(e, c);
        return r;
    }
    LaurentPoly operator-(const LaurentPoly& o) const { return *this + o * -1; }
    LaurentPoly operator*(std::int64_t k) const
    {
        LaurentPoly r;
        for (auto& [e, c] : terms_)
            r.add(e, checked_mul(c, k));
        return r;
    }
    LaurentPoly operator*(const LaurentPoly& o) const
    {
        LaurentPoly r;
        for (auto& [e, c] : terms_)
            for (auto& [f, d] : o.terms_)
                r.add(e + f, checked_mul(c, d));
        return r;
    }

    // Substitute q -> q^-1.
    LaurentPoly reversed() const
    {
        LaurentPoly r;
        for (auto& [e, c] : terms_)
            r.add(-e, c);
        return r;
    }

    bool operator==(const LaurentPoly&) const = default;

    std::string to_string(const std::string& var = "q") const
    {
        if (terms_.empty())
            return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [e, c] : terms_)
        {
            std::int64_t a = c < 0 ? -c : c;
            if (first)
                os << (c < 0 ? "-" : "");
            else
                os << (c < 0 ? " - " : " + ");
            first = false;
            if (e == 0)
                os << a;
            else
            {
                if (a != 1)
                    os << a << "*";
                os << var;
                if (e != 1)
                    os << "^" << e;
            }
        }
        return os.str();
    }

private:
    std::map<int, std::int64_t> terms_;
};

// ---------------------------------------------------------------------------
// Smith normal form

namespace detail
{

struct Overflow
{
};

inline std::int64_t ck_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw Overflow{};
    return r;
}

inline std::int64_t ck_sub(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r))
        throw Overflow{};
    return r;
}

inline BigInt ck_mul(const BigInt& a, const BigInt& b) { return a * b; }
inline BigInt ck_sub(const BigInt& a, const BigInt& b) { return a - b; }

template <class T>
T abs_of(const T& x)
{
    return x < 0 ? T(-x) : x;
}

// Dense SNF on a copy; returns the nonzero invariant factors.  When U and
// V are given they receive unimodular matrices with U A V diagonal.
template <class T>
std::vector<T> dense_snf(std::vector<std::vector<T>> a, std::vector<std::vector<T>>* U = nullptr,
                         std::vector<std::vector<T>>* V = nullptr)
{
    int rows = static_cast<int>(a.size());
    int cols = rows ? static_cast<int>(a[0].size()) : 0;
    auto identity = [](int n) {
        std::vector<std::vector<T>> m(n, std::vector<T>(n, T(0)));
        for (int i = 0; i < n; ++i)
            m[i][i] = T(1);
        return m;
    };
    if (U)
        *U = identity(rows);
    if (V)
        *V = identity(cols);
    auto row_op = [&](int dst, int src, const T& k) { // row dst -= k * row src
        for (int c = 0; c < cols; ++c)
            if (a[src][c] != 0)
                a[dst][c] = ck_sub(a[dst][c], ck_mul(k, a[src][c]));
        if (U)
            for (int c = 0; c < rows; ++c)
                (*U)[dst][c] = ck_sub((*U)[dst][c], ck_mul(k, (*U)[src][c]));
    };
    auto col_op = [&](int dst, int src, const T& k) { // col dst -= k * col src
        for (int r = 0; r < rows; ++r)
            if (a[r][src] != 0)
                a[r][dst] = ck_sub(a[r][dst], ck_mul(k, a[r][src]));
        if (V)
            for (int r = 0; r < cols; ++r)
                (*V)[r][dst] = ck_sub((*V)[r][dst], ck_mul(k, (*V)[r][src]));
    };
    auto swap_rows = [&](int i, int j) {
        std::swap(a[i], a[j]);
        if (U)
            std::swap((*U)[i], (*U)[j]);
    };
    auto swap_cols = [&](int i, int j) {
        for (auto& r : a)
            std::swap(r[i], r[j]);
        if (V)
            for (auto& r : *V)
                std::swap(r[i], r[j]);
    };
    auto negate_row = [&](int i) {
        for (auto& x : a[i])
            x = -x;
        if (U)
            for (auto& x : (*U)[i])
                x = -x;
    };
    std::vector<T> diag;
    int t = 0;
    while (t < rows && t < cols)
    {
        // Smallest nonzero entry of the remaining block.
        int pr = -1, pc = -1;
        for (int r = t; r < rows; ++r)
            for (int c = t; c < cols; ++c)
                if (a[r][c] != 0 && (pr < 0 || abs_of(a[r][c]) < abs_of(a[pr][pc])))
                    pr = r, pc = c;
        if (pr < 0)
            break;
        swap_rows(t, pr);
        swap_cols(t, pc);
        bool clean = false;
        while (!clean)
        {
            clean = true;
            for (int r = t + 1; r < rows; ++r)
                if (a[r][t] != 0)
                    row_op(r, t, T(a[r][t] / a[t][t]));
            for (int c = t + 1; c < cols; ++c)
                if (a[t][c] != 0)
                    col_op(c, t, T(a[t][c] / a[t][t]));
            // Remainders smaller than the pivot become the new pivot.
            int br = -1, bc = -1;
            for (int r = t + 1; r < rows; ++r)
                if (a[r][t] != 0)
                    br = r;
            for (int c = t + 1; c < cols; ++c)
                if (a[t][c] != 0)
                    bc = c;
            if (br >= 0)
            {
                swap_rows(t, br);
                clean = false;
                continue;
            }
            if (bc >= 0)
            {
                swap_cols(t, bc);
                clean = false;
                continue;
            }
            // Divisibility: fold a row containing a non-multiple into row t.
            for (int r = t + 1; r < rows && clean; ++r)
                for (int c = t + 1; c < cols; ++c)
                    if (a[r][c] % a[t][t] != 0)
                    {
                        row_op(t, r, T(-1));
                        clean = false;
                        break;
                    }
        }
        if (a[t][t] < 0)
            negate_row(t);
        diag.push_back(a[t][t]);
        ++t;
    }
    return diag;
}

template <class T>
struct SparseRows
{
    std::vector<std::map<int, T>> rows;
    std::vector<std::set<int>> cols;
};

// Invariant factors of a sparse matrix given as (row, col, value) triples.
template <class T>
std::vector<T> sparse_invariant_factors(int nrows, int ncols,
                                        const std::vector<std::tuple<int, int, std::int64_t>>& entries)
{
    SparseRows<T> m;
    m.rows.resize(nrows);
    m.cols.resize(ncols);
    for (auto& [r, c, v] : entries)
    {
        if (v == 0)
            continue;
        T& x = m.rows[r][c];
        x = T(x + T(v));
        if (x == 0)
            m.rows[r].erase(c);
    }
    for (int r = 0; r < nrows; ++r)
        for (auto& [c, v] : m.rows[r])
            m.cols[c].insert(r);
    std::vector<char> alive(nrows, 1);
    std::size_t units = 0;
    // Unit pivots.  Rows are swept in order; within a row the unit whose
    // column is shortest is used, which keeps fill-in low.
    auto eliminate = [&](int pr, int pc) {
        T u = m.rows[pr][pc];
        std::vector<int> others(m.cols[pc].begin(), m.cols[pc].end());
        for (int r : others)
        {
            if (r == pr)
                continue;
            T k = ck_mul(m.rows[r][pc], u); // u = +-1 so k = a / u
            for (auto& [c, v] : m.rows[pr])
            {
                T& x = m.rows[r][c];
                x = ck_sub(x, ck_mul(k, v));
                if (x == 0)
                {
                    m.rows[r].erase(c);
                    m.cols[c].erase(r);
                }
                else
                    m.cols[c].insert(r);
            }
        }
        for (auto& [c, v] : m.rows[pr])
            m.cols[c].erase(pr);
        m.rows[pr].clear();
        alive[pr] = 0;
        ++units;
    };
    bool progress = true;
    while (progress)
    {
        progress = false;
        for (int r = 0; r < nrows; ++r)
        {
            if (!alive[r] || m.rows[r].empty())
                continue;
            int pc = -1;
            for (auto& [c, v] : m.rows[r])
                if ((v == 1 || v == -1) && (pc < 0 || m.cols[c].size() < m.cols[pc].size()))
                    pc = c;
            if (pc >= 0)
            {
                eliminate(r, pc);
                progress = true;
            }
        }
    }
    // Dense remainder.
    std::vector<int> rr, cc;
    for (int r = 0; r < nrows; ++r)
        if (!m.rows[r].empty())
            rr.push_back(r);
    for (int c = 0; c < ncols; ++c)
        if (!m.cols[c].empty())
            cc.push_back(c);
    std::vector<T> out(units, T(1));
    if (!rr.empty())
    {
        std::map<int, int> cidx;
        for (std::size_t i = 0; i < cc.size(); ++i)
            cidx[cc[i]] = static_cast<int>(i);
        std::vector<std::vector<T>> dense(rr.size(), std::vector<T>(cc.size(), T(0)));
        for (std::size_t i = 0; i < rr.size(); ++i)
            for (auto& [c, v] : m.rows[rr[i]])
                dense[i][cidx[c]] = v;
        for (auto& d : dense_snf(std::move(dense)))
            out.push_back(d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace detail

using IntMatrix = std::vector<std::vector<BigInt>>;

struct SmithForm
{
    std::vector<BigInt> factors; // nonzero diagonal entries, each dividing the next
    IntMatrix U, V;              // U * A * V is diagonal
};

inline SmithForm smith_normal_form(const IntMatrix& A)
{
    SmithForm s;
    s.factors = detail::dense_snf(A, &s.U, &s.V);
    return s;
}

// Nonzero invariant factors of a sparse integer matrix, ascending.
inline std::vector<BigInt> invariant_factors(int rows, int cols,
                                             const std::vector<std::tuple<int, int, std::int64_t>>& entries)
{
    try
    {
        auto f = detail::sparse_invariant_factors<std::int64_t>(rows, cols, entries);
        return std::vector<BigInt>(f.begin(), f.end());
    }
    catch (const detail::Overflow&)
    {
        return detail::sparse_invariant_factors<BigInt>(rows, cols, entries);
    }
}

// ---------------------------------------------------------------------------
// Integer bigraded complexes

struct IntegerBigradedComplex
{
    using Entries = std::vector<std::tuple<int, int, std::int64_t>>; // (target row, source col, value)

    // ranks[j][i]: rank of the free module in bidegree (i, j).
    std::map<int, std::map<int, int>> ranks;
    // diff[{j, i}]: matrix of d from degree i to i + 1 inside internal degree j.
    std::map<std::pair<int, int>, Entries> diff;

    int rank(int i, int j) const
    {
        auto a = ranks.find(j);
        if (a == ranks.end())
            return 0;
        auto b = a->second.find(i);
        return b == a->second.end() ? 0 : b->second;
    }

    // Throws unless consecutive matrices compose to zero.
    void check_d_squared() const
    {
        for (auto& [key, e1] : diff)
        {
            auto [j, i] = key;
            auto it = diff.find({j, i + 1});
            if (it == diff.end())
                continue;
            std::map<int, std::vector<std::pair<int, std::int64_t>>> by_src; // mid index -> (target, value)
            for (auto& [t, s, v] : it->second)
                by_src[s].push_back({t, v});
            std::map<std::pair<int, int>, std::int64_t> prod;
            for (auto& [mid, s, v] : e1)
                if (auto b = by_src.find(mid); b != by_src.end())
                    for (auto& [t, w] : b->second)
                        prod[{t, s}] = checked_add(prod[{t, s}], checked_mul(v, w));
            for (auto& [ts, v] : prod)
                if (v != 0)
                    throw InvariantViolation("integer complex has d o d != 0 at (" + std::to_string(i) + ", " +
                                             std::to_string(j) + ")");
        }
    }
};

inline IntegerBigradedComplex apply_tqft(const BasedComplex& C)
{
    IntegerBigradedComplex out;
    std::vector<int> index(C.size());
    for (CellId c = 0; c < static_cast<CellId>(C.size()); ++c)
    {
        const Tangle& t = C.object(c);
        if (t.points() != 0 || t.circles() != 0)
            throw InvariantViolation("apply_tqft needs a fully delooped complex over the empty tangle; deloop first",
                                     "not_delooped");
        index[c] = out.ranks[C.qshift(c)][C.hdeg(c)]++;
    }
    for (CellId c = 0; c < static_cast<CellId>(C.size()); ++c)
        for (auto& [t, f] : C.row(c))
            out.diff[{C.qshift(c), C.hdeg(c)}].emplace_back(index[t], index[c], f.scalar());
    return out;
}

// ---------------------------------------------------------------------------
// Homology

struct HomologyGroup
{
    int free = 0;
    std::vector<BigInt> torsion; // invariant factors >= 2, ascending (each divides the next)

    bool operator==(const HomologyGroup&) const = default;
    bool is_zero() const { return free == 0 && torsion.empty(); }

    std::string to_string() const
    {
        std::ostringstream os;
        bool first = true;
        if (free)
        {
            os << "Z";
            if (free > 1)
                os << "^" << free;
            first = false;
        }
        for (auto& t : torsion)
        {
            os << (first ? "" : " + ") << "Z/" << t;
            first = false;
        }
        return first ? "0" : os.str();
    }
};

using BigradedHomology = std::map<std::pair<int, int>, HomologyGroup>; // key (i, j)

inline HomologyGroup group_at(const BigradedHomology& H, int i, int j)
{
    auto it = H.find({i, j});
    return it == H.end() ? HomologyGroup{} : it->second;
}

namespace detail
{

// Homology of the chain complex in one internal degree.
inline std::map<int, HomologyGroup> homology_row(int j, const std::map<int, int>& ranks,
                                                 const std::map<std::pair<int, int>, IntegerBigradedComplex::Entries>& diff)
{
    std::map<int, std::vector<BigInt>> factors; // by source degree i
    for (auto& [i, r] : ranks)
    {
        auto it = diff.find({j, i});
        int target = ranks.count(i + 1) ? ranks.at(i + 1) : 0;
        if (it != diff.end() && !it->second.empty())
            factors[i] = invariant_factors(target, r, it->second);
    }
    std::map<int, HomologyGroup> out;
    for (auto& [i, r] : ranks)
    {
        HomologyGroup g;
        int out_rank = factors.count(i) ? static_cast<int>(factors[i].size()) : 0;
        int in_rank = factors.count(i - 1) ? static_cast<int>(factors[i - 1].size()) : 0;
        g.free = r - out_rank - in_rank;
        if (factors.count(i - 1))
            for (auto& d : factors[i - 1])
                if (d > 1)
                    g.torsion.push_back(d);
        if (!g.is_zero())
            out[i] = std::move(g);
    }
    return out;
}

} // namespace detail

// Homology of every internal degree; threads > 1 computes rows concurrently.
inline BigradedHomology homology(const IntegerBigradedComplex& IC, unsigned threads = 1)
{
    IC.check_d_squared();
    for (auto& [key, e] : IC.diff)
        if (!e.empty() && !IC.ranks.count(key.first))
            throw InvariantViolation("differential outside the graded support");
    BigradedHomology H;
    std::vector<int> js;
    for (auto& [j, r] : IC.ranks)
        js.push_back(j);
    std::vector<std::map<int, HomologyGroup>> rows(js.size());
    auto work = [&](std::size_t k) { rows[k] = detail::homology_row(js[k], IC.ranks.at(js[k]), IC.diff); };
    if (threads <= 1 || js.size() <= 1)
        for (std::size_t k = 0; k < js.size(); ++k)
            work(k);
    else
    {
        std::vector<std::future<void>> fs;
        std::size_t next = 0;
        std::mutex mu;
        for (unsigned t = 0; t < std::min<std::size_t>(threads, js.size()); ++t)
            fs.push_back(std::async(std::launch::async, [&] {
                while (true)
                {
                    std::size_t k;
                    {
                        std::lock_guard<std::mutex> lock(mu);
                        if (next >= js.size())
                            return;
                        k = next++;
                    }
                    work(k);
                }
            }));
        for (auto& f : fs)
            f.get();
    }
    for (std::size_t k = 0; k < js.size(); ++k)
        for (auto& [i, g] : rows[k])
            H[{i, js[k]}] = std::move(g);
    return H;
}

inline LaurentPoly graded_euler_characteristic(const BigradedHomology& H)
{
    LaurentPoly p;
    for (auto& [ij, g] : H)
        p.add(ij.second, (ij.first % 2 ? -1 : 1) * static_cast<std::int64_t>(g.free));
    return p;
}

// The same sum taken over chain ranks.
inline LaurentPoly graded_euler_characteristic(const IntegerBigradedComplex& IC)
{
    LaurentPoly p;
    for (auto& [j, row] : IC.ranks)
        for (auto& [i, r] : row)
            p.add(j, (i % 2 ? -1 : 1) * static_cast<std::int64_t>(r));
    return p;
}

// Torsion orders that occur anywhere, ascending and without repeats.
inline std::vector<BigInt> torsion_orders(const BigradedHomology& H)
{
    std::set<BigInt> s;
    for (auto& [ij, g] : H)
        s.insert(g.torsion.begin(), g.torsion.end());
    return {s.begin(), s.end()};
}

// Mirror image: H(L!)^{i,j} = H(L)^{-i,-j} on free parts, torsion moves to
// (1 - i, -j).
inline BigradedHomology mirror_homology(const BigradedHomology& H)
{
    BigradedHomology out;
    for (auto& [ij, g] : H)
    {
        auto [i, j] = ij;
        if (g.free)
            out[{-i, -j}].free += g.free;
        if (!g.torsion.empty())
        {
            auto& t = out[{1 - i, -j}].torsion;
            t.insert(t.end(), g.torsion.begin(), g.torsion.end());
            std::sort(t.begin(), t.end());
        }
    }
    return out;
}

inline std::string homology_table(const BigradedHomology& H)
{
    std::ostringstream os;
    for (auto& [ij, g] : H)
        os << "(" << ij.first << ", " << ij.second << "): " << g.to_string() << "\n";
    return os.str();
}

} // namespace khmorse

#endif
