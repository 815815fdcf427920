/*
 * cob.hpp
 *
 * Objects and morphisms of the dotted cobordism category Cob(2b).
 *
 * Objects are crossingless tangles: a non-crossing perfect matching of 2b
 * boundary points (read clockwise from the basepoint) together with a count
 * of closed circles.  Morphisms are integer combinations of surfaces.  A
 * surface is stored only through its component structure: which boundary
 * segments (arcs and circles of the domain and codomain) lie on a common
 * component, and which components carry a dot.  Every stored generator is
 * in normal form: no closed components, and each component is a disc
 * bounded by exactly one boundary circle (a wall cycle or a tangle circle)
 * carrying at most one dot.  Neck-cutting reduces any surface to such
 * discs, so the component partition of a generator is fixed by its domain
 * and codomain and only the dots vary.  Equality of morphisms is therefore
 * syntactic.
 *
 * Segment numbering for a pair (domain, codomain) with b arcs:
 *
 *     [0, b)                 domain arcs, ordered by smaller endpoint
 *     [b, b + cd)            domain circles
 *     [b + cd, 2b + cd)      codomain arcs
 *     [2b + cd, 2b + cd + cc) codomain circles
 */
#ifndef KHMORSE_COB_HPP
#define KHMORSE_COB_HPP

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace khmorse
{

using Coeff = std::int64_t;

inline Coeff checked_mul(Coeff a, Coeff b)
{
    Coeff r;
    if (__builtin_mul_overflow(a, b, &r))
        throw InvariantViolation("coefficient overflow in cobordism arithmetic");
    return r;
}

inline Coeff checked_add(Coeff a, Coeff b)
{
    Coeff r;
    if (__builtin_add_overflow(a, b, &r))
        throw InvariantViolation("coefficient overflow in cobordism arithmetic");
    return r;
}

// ---------------------------------------------------------------------------
// Tangle

class Tangle
{
public:
    Tangle() = default;

    explicit Tangle(std::vector<std::uint8_t> pairing, std::uint32_t circles = 0)
        : pairing_(std::move(pairing)), circles_(circles)
    {
        validate();
        index_arcs();
    }

    static Tangle empty(std::uint32_t circles = 0)
    {
        return Tangle({}, circles);
    }

    // Identity braid on n strands.  Boundary order: tops t1..tn, then
    // bottoms bn..b1, so t_j sits at j-1 and b_j at 2n-j.
    static Tangle identity_braid(int strands)
    {
        std::vector<std::uint8_t> p(2 * strands);
        for (int j = 1; j <= strands; ++j)
        {
            p[j - 1] = static_cast<std::uint8_t>(2 * strands - j);
            p[2 * strands - j] = static_cast<std::uint8_t>(j - 1);
        }
        return Tangle(std::move(p));
    }

    int points() const { return static_cast<int>(pairing_.size()); }
    int arcs() const { return points() / 2; }
    std::uint32_t circles() const { return circles_; }
    const std::vector<std::uint8_t>& pairing() const { return pairing_; }

    int partner(int p) const { return pairing_[p]; }
    int arc_of(int p) const { return arc_of_[p]; }

    // Endpoints (smaller first) of the k-th arc.
    std::pair<int, int> arc(int k) const
    {
        int p = arc_start_[k];
        return {p, pairing_[p]};
    }

    Tangle with_circles(std::uint32_t c) const
    {
        Tangle t = *this;
        t.circles_ = c;
        return t;
    }

    bool operator==(const Tangle& o) const
    {
        return circles_ == o.circles_ && pairing_ == o.pairing_;
    }
    std::strong_ordering operator<=>(const Tangle& o) const
    {
        if (auto c = pairing_ <=> o.pairing_; c != 0)
            return c;
        return circles_ <=> o.circles_;
    }

    static bool is_noncrossing(const std::vector<std::uint8_t>& p)
    {
        std::vector<int> stack;
        for (int i = 0; i < static_cast<int>(p.size()); ++i)
        {
            if (p[i] > i)
                stack.push_back(i);
            else
            {
                if (stack.empty() || stack.back() != p[i])
                    return false;
                stack.pop_back();
            }
        }
        return stack.empty();
    }

    std::string to_string() const
    {
        std::ostringstream os;
        os << "[";
        for (int k = 0; k < arcs(); ++k)
        {
            auto [p, q] = arc(k);
            os << (k ? " " : "") << p << "-" << q;
        }
        os << "]";
        if (circles_)
            os << "+" << circles_ << "o";
        return os.str();
    }

private:
    void validate() const
    {
        int n = points();
        if (n % 2 != 0 || n > 250)
            throw InvariantViolation("tangle must have an even number (< 250) of boundary points");
        for (int i = 0; i < n; ++i)
        {
            int j = pairing_[i];
            if (j >= n || j == i || pairing_[j] != i)
                throw InvariantViolation("tangle pairing is not a fixed-point-free involution");
        }
        if (!is_noncrossing(pairing_))
            throw InvariantViolation("tangle pairing is crossing");
    }

    void index_arcs()
    {
        arc_of_.assign(pairing_.size(), 0);
        arc_start_.clear();
        for (int i = 0; i < points(); ++i)
            if (pairing_[i] > i)
            {
                arc_of_[i] = arc_of_[pairing_[i]] = static_cast<std::uint8_t>(arc_start_.size());
                arc_start_.push_back(static_cast<std::uint8_t>(i));
            }
    }

    std::vector<std::uint8_t> pairing_;
    std::vector<std::uint8_t> arc_of_;
    std::vector<std::uint8_t> arc_start_;
    std::uint32_t circles_ = 0;
};

// ---------------------------------------------------------------------------
// Closed surfaces and generators

// Scalar value of a closed component of the given genus and dot count.
inline Coeff evaluate_closed(int genus, int dots)
{
    if (genus == 0)
        return dots == 1 ? 1 : 0;
    if (genus == 1)
        return dots == 0 ? 2 : 0;
    return 0;
}

// Component structure of a normal-form generator.
struct Surface
{
    std::vector<std::uint8_t> comp; // component id per segment, first-occurrence order
    std::uint64_t dots = 0;         // bit c set: component c carries a dot

    int components() const
    {
        int m = 0;
        for (auto c : comp)
            m = std::max(m, c + 1);
        return m;
    }

    auto operator<=>(const Surface&) const = default;
    bool operator==(const Surface&) const = default;
};

// Segment layout helper for a (domain, codomain) pair.
struct SegmentLayout
{
    int b = 0;
    int cd = 0;
    int cc = 0;

    SegmentLayout(const Tangle& dom, const Tangle& cod)
        : b(dom.arcs()), cd(static_cast<int>(dom.circles())), cc(static_cast<int>(cod.circles()))
    {
    }

    int dom_arc(int k) const { return k; }
    int dom_circle(int c) const { return b + c; }
    int cod_arc(int k) const { return b + cd + k; }
    int cod_circle(int c) const { return 2 * b + cd + c; }
    int domain_size() const { return b + cd; }
    int size() const { return 2 * b + cd + cc; }
    bool is_circle(int s) const { return (s >= b && s < b + cd) || s >= 2 * b + cd; }
    bool is_domain(int s) const { return s < b + cd; }
};

// For every boundary cycle formed by domain arcs, codomain arcs and the wall
// segments p x [0,1], report the domain arc it passes through.
inline std::vector<int> wall_cycles(const Tangle& dom, const Tangle& cod)
{
    int n = dom.points();
    std::vector<int> out;
    std::vector<char> seen(n, 0);
    for (int p = 0; p < n; ++p)
    {
        if (seen[p])
            continue;
        out.push_back(dom.arc_of(p));
        int x = p;
        do
        {
            int q = dom.partner(x);
            seen[x] = seen[q] = 1;
            x = cod.partner(q);
        } while (x != p);
    }
    return out;
}

// Segments (domain and codomain arcs) met by each wall cycle, in the order
// of wall_cycles().  Arcs on one cycle must lie on a common component.
inline std::vector<std::vector<int>> wall_cycle_segments(const Tangle& dom, const Tangle& cod)
{
    SegmentLayout L(dom, cod);
    int n = dom.points();
    std::vector<std::vector<int>> out;
    std::vector<char> seen(n, 0);
    for (int p = 0; p < n; ++p)
    {
        if (seen[p])
            continue;
        std::vector<int> segs;
        int x = p;
        do
        {
            int q = dom.partner(x);
            seen[x] = seen[q] = 1;
            segs.push_back(L.dom_arc(dom.arc_of(x)));
            segs.push_back(L.cod_arc(cod.arc_of(q)));
            x = cod.partner(q);
        } while (x != p);
        out.push_back(std::move(segs));
    }
    return out;
}

// Number of boundary circles of each component of a generator.
inline std::vector<int> boundary_circles(const Tangle& dom, const Tangle& cod, const Surface& s)
{
    SegmentLayout L(dom, cod);
    std::vector<int> bc(s.components(), 0);
    for (int a : wall_cycles(dom, cod))
        ++bc[s.comp[L.dom_arc(a)]];
    for (int c = 0; c < L.cd; ++c)
        ++bc[s.comp[L.dom_circle(c)]];
    for (int c = 0; c < L.cc; ++c)
        ++bc[s.comp[L.cod_circle(c)]];
    return bc;
}

// Euler characteristic of each (genus zero) component.
inline std::vector<int> component_chi(const Tangle& dom, const Tangle& cod, const Surface& s)
{
    auto bc = boundary_circles(dom, cod, s);
    for (auto& x : bc)
        x = 2 - x;
    return bc;
}

inline Surface identity_surface(const Tangle& t)
{
    SegmentLayout L(t, t);
    Surface s;
    s.comp.resize(L.size());
    for (int k = 0; k < L.b; ++k)
        s.comp[L.dom_arc(k)] = s.comp[L.cod_arc(k)] = static_cast<std::uint8_t>(k);
    for (int c = 0; c < L.cd; ++c)
        s.comp[L.dom_circle(c)] = s.comp[L.cod_circle(c)] = static_cast<std::uint8_t>(L.b + c);
    return s;
}

// Renumber components by first occurrence, carrying dots along.
inline Surface canonical_surface(const std::vector<int>& comp, const std::vector<int>& dots_of)
{
    Surface s;
    s.comp.resize(comp.size());
    std::vector<int> remap(dots_of.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < comp.size(); ++i)
    {
        int c = comp[i];
        if (remap[c] < 0)
        {
            remap[c] = next++;
            if (dots_of[c])
                s.dots |= std::uint64_t(1) << remap[c];
        }
        s.comp[i] = static_cast<std::uint8_t>(remap[c]);
    }
    if (next > 64)
        throw InvariantViolation("surface has more than 64 components");
    return s;
}

// A generator with explicit genus, used for input that may not be normal.
struct CobComponent
{
    std::vector<int> segments;
    int genus = 0;
    int dots = 0;
};

struct CobGenerator
{
    Tangle domain;
    Tangle codomain;
    std::vector<CobComponent> components;
};

// ---------------------------------------------------------------------------
// DottedMorphism

class DottedMorphism
{
public:
    using Term = std::pair<Surface, Coeff>;

    DottedMorphism() = default;
    DottedMorphism(Tangle dom, Tangle cod) : dom_(std::move(dom)), cod_(std::move(cod))
    {
        if (dom_.points() != cod_.points())
            throw InvariantViolation("morphism between tangles with different boundary");
    }

    // Identity; with circles present this is a sum (each cylinder is cut).
    static DottedMorphism identity(const Tangle& t, Coeff c = 1);

    const Tangle& domain() const { return dom_; }
    const Tangle& codomain() const { return cod_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Add c times an already normal generator.
    void add(const Surface& s, Coeff c)
    {
        if (c == 0)
            return;
        auto it = std::lower_bound(terms_.begin(), terms_.end(), s,
                                   [](const Term& t, const Surface& x) { return t.first < x; });
        if (it != terms_.end() && it->first == s)
        {
            it->second = checked_add(it->second, c);
            if (it->second == 0)
                terms_.erase(it);
        }
        else
            terms_.insert(it, Term{s, c});
    }

    DottedMorphism& operator+=(const DottedMorphism& o)
    {
        check_parallel(o);
        for (auto& [s, c] : o.terms_)
            add(s, c);
        return *this;
    }

    DottedMorphism& operator-=(const DottedMorphism& o)
    {
        check_parallel(o);
        for (auto& [s, c] : o.terms_)
            add(s, -c);
        return *this;
    }

    DottedMorphism operator*(Coeff k) const
    {
        DottedMorphism m(dom_, cod_);
        if (k == 0)
            return m;
        m.terms_ = terms_;
        for (auto& t : m.terms_)
            t.second = checked_mul(t.second, k);
        return m;
    }

    DottedMorphism operator-() const { return *this * -1; }

    bool operator==(const DottedMorphism& o) const
    {
        return dom_ == o.dom_ && cod_ == o.cod_ && terms_ == o.terms_;
    }

    // Coefficient of the empty surface, for morphisms between empty tangles.
    Coeff scalar() const
    {
        if (dom_.points() || cod_.points() || dom_.circles() || cod_.circles())
            throw InvariantViolation("scalar() requires morphism between empty tangles");
        return terms_.empty() ? 0 : terms_.front().second;
    }

    // +1 or -1 when this is plus or minus the identity of a circle-free
    // tangle, 0 otherwise.
    int invertible_sign() const
    {
        if (terms_.size() != 1 || !(dom_ == cod_) || dom_.circles())
            return 0;
        Coeff c = terms_.front().second;
        if (c != 1 && c != -1)
            return 0;
        if (!(terms_.front().first == identity_surface(dom_)))
            return 0;
        return static_cast<int>(c);
    }
    bool is_invertible() const { return invertible_sign() != 0; }

    std::string to_string() const
    {
        std::ostringstream os;
        if (terms_.empty())
            return "0";
        bool first = true;
        for (auto& [s, c] : terms_)
        {
            os << (first ? "" : " + ") << c << "*{";
            first = false;
            for (std::size_t i = 0; i < s.comp.size(); ++i)
                os << (i ? "," : "") << int(s.comp[i]);
            os << "}";
            if (s.dots)
                os << "d" << s.dots;
        }
        return os.str();
    }

private:
    void check_parallel(const DottedMorphism& o) const
    {
        if (!(dom_ == o.dom_) || !(cod_ == o.cod_))
            throw InvariantViolation("adding morphisms with different domain or codomain");
    }

    Tangle dom_;
    Tangle cod_;
    std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// SurfaceBuilder: assemble a surface from pieces of known Euler
// characteristic, glue them, attach boundary segments, then normalize.

class SurfaceBuilder
{
public:
    SurfaceBuilder(const Tangle& dom, const Tangle& cod)
        : dom_(dom), cod_(cod), layout_(dom, cod), seg_piece_(layout_.size(), -1)
    {
    }

    int add_piece(int chi, int dots)
    {
        parent_.push_back(static_cast<int>(parent_.size()));
        chi_.push_back(chi);
        dots_.push_back(dots);
        return static_cast<int>(parent_.size()) - 1;
    }

    // Identify two pieces along a common subspace of Euler characteristic
    // `shared` (1 for an interval, 0 for a circle).
    void glue(int a, int b, int shared)
    {
        int ra = find(a), rb = find(b);
        if (ra == rb)
        {
            chi_[ra] -= shared;
            return;
        }
        parent_[rb] = ra;
        chi_[ra] += chi_[rb] - shared;
        dots_[ra] += dots_[rb];
    }

    void add_dots(int piece, int d) { dots_[find(piece)] += d; }

    void attach(int segment, int piece) { seg_piece_[segment] = piece; }

    const SegmentLayout& layout() const { return layout_; }

    // Normalize and add coeff times the resulting surface to out.
    void emit(Coeff coeff, DottedMorphism& out)
    {
        if (coeff == 0)
            return;
        int nseg = layout_.size();
        std::vector<int> cls(parent_.size(), -1);
        std::vector<int> seg_class(nseg);
        int ncls = 0;
        for (int s = 0; s < nseg; ++s)
        {
            if (seg_piece_[s] < 0)
                throw InvariantViolation("surface builder: unattached boundary segment");
            int r = find(seg_piece_[s]);
            if (cls[r] < 0)
                cls[r] = ncls++;
            seg_class[s] = cls[r];
        }
        // Closed components contribute scalars.
        for (std::size_t p = 0; p < parent_.size(); ++p)
        {
            int r = find(static_cast<int>(p));
            if (cls[r] >= 0 || r != static_cast<int>(p))
                continue;
            int twice_genus = 2 - chi_[r];
            if (twice_genus < 0 || twice_genus % 2)
                throw InvariantViolation("surface builder: closed component with invalid Euler characteristic");
            coeff = checked_mul(coeff, evaluate_closed(twice_genus / 2, dots_[r]));
            if (coeff == 0)
                return;
        }
        std::vector<int> chi(ncls, 0), dots(ncls, 0);
        for (std::size_t p = 0; p < parent_.size(); ++p)
        {
            int r = find(static_cast<int>(p));
            if (r == static_cast<int>(p) && cls[r] >= 0)
            {
                chi[cls[r]] = chi_[r];
                dots[cls[r]] = dots_[r];
            }
        }
        // Boundary circles: wall cycles first, then tangle circles.
        std::vector<int> circle_of(nseg, -1);
        int ncirc = 0;
        for (auto& cyc : wall_cycle_segments(dom_, cod_))
        {
            for (int sg : cyc)
                circle_of[sg] = ncirc;
            ++ncirc;
        }
        for (int sg = 0; sg < nseg; ++sg)
            if (layout_.is_circle(sg))
                circle_of[sg] = ncirc++;
        std::vector<std::vector<int>> circles_in(ncls);
        {
            std::vector<char> seen(ncirc, 0);
            for (int sg = 0; sg < nseg; ++sg)
                if (!seen[circle_of[sg]])
                {
                    seen[circle_of[sg]] = 1;
                    circles_in[seg_class[sg]].push_back(circle_of[sg]);
                }
        }
        // Cut every component into discs, one per boundary circle.  A handle
        // becomes a factor 2 and a dot.  Cutting the necks of an undotted
        // sphere with k holes leaves k terms, each with a single undotted
        // disc; with one dot every disc ends up dotted.
        std::vector<std::pair<std::uint64_t, Coeff>> acc{{0, coeff}};
        for (int c = 0; c < ncls; ++c)
        {
            int twice_genus = 2 - chi[c] - static_cast<int>(circles_in[c].size());
            if (twice_genus < 0 || twice_genus % 2)
                throw InvariantViolation("surface builder: component with invalid Euler characteristic");
            int genus = twice_genus / 2;
            Coeff factor = 1;
            if (genus == 1 && dots[c] == 0)
            {
                factor = 2;
                dots[c] = 1;
            }
            else if (genus >= 1 || dots[c] >= 2)
                return;
            std::uint64_t all = 0;
            for (int x : circles_in[c])
                all |= std::uint64_t(1) << x;
            std::vector<std::uint64_t> options;
            if (dots[c] == 1)
                options.push_back(all);
            else if (circles_in[c].size() == 1)
                options.push_back(0);
            else
                for (int x : circles_in[c])
                    options.push_back(all & ~(std::uint64_t(1) << x));
            std::vector<std::pair<std::uint64_t, Coeff>> next;
            for (auto& [m, k] : acc)
                for (auto o : options)
                    next.emplace_back(m | o, checked_mul(k, factor));
            acc = std::move(next);
        }
        if (ncirc > 64)
            throw InvariantViolation("surface with more than 64 boundary circles");
        for (auto& [m, k] : acc)
        {
            std::vector<int> dots_of(ncirc);
            for (int x = 0; x < ncirc; ++x)
                dots_of[x] = (m >> x) & 1;
            out.add(canonical_surface(circle_of, dots_of), k);
        }
    }

private:
    int find(int x)
    {
        while (parent_[x] != x)
        {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    const Tangle& dom_;
    const Tangle& cod_;
    SegmentLayout layout_;
    std::vector<int> parent_, chi_, dots_;
    std::vector<int> seg_piece_;
};

// ---------------------------------------------------------------------------
// Operations

inline DottedMorphism normalize(const CobGenerator& g, Coeff coeff)
{
    SurfaceBuilder sb(g.domain, g.codomain);
    DottedMorphism out(g.domain, g.codomain);
    int nseg = sb.layout().size();
    std::vector<int> seen(nseg, 0);
    // Each listed component becomes one piece whose Euler characteristic is
    // reconstructed from its genus and boundary circles.
    std::vector<int> piece_of_segment(nseg, -1);
    std::vector<int> pieces;
    for (auto& c : g.components)
    {
        int p = sb.add_piece(0, c.dots);
        pieces.push_back(p);
        for (int s : c.segments)
        {
            if (s < 0 || s >= nseg || seen[s]++)
                throw InvariantViolation("generator components do not partition the segments");
            sb.attach(s, p);
            piece_of_segment[s] = static_cast<int>(pieces.size()) - 1;
        }
    }
    for (int s = 0; s < nseg; ++s)
        if (!seen[s])
            throw InvariantViolation("generator leaves a segment uncovered");
    for (auto& cyc : wall_cycle_segments(g.domain, g.codomain))
        for (int s : cyc)
            if (piece_of_segment[s] != piece_of_segment[cyc.front()])
                throw InvariantViolation("arcs joined along the cylinder wall lie on different components");
    // Boundary circles per listed component.
    std::vector<int> bc(g.components.size(), 0);
    SegmentLayout L(g.domain, g.codomain);
    for (int a : wall_cycles(g.domain, g.codomain))
        ++bc[piece_of_segment[L.dom_arc(a)]];
    for (int s = 0; s < nseg; ++s)
        if (L.is_circle(s))
            ++bc[piece_of_segment[s]];
    for (std::size_t i = 0; i < g.components.size(); ++i)
    {
        int chi = 2 - 2 * g.components[i].genus - bc[i];
        // add_piece was called with chi 0; adjust by gluing nothing.
        sb.glue(pieces[i], pieces[i], -chi);
    }
    sb.emit(coeff, out);
    return out;
}

inline DottedMorphism DottedMorphism::identity(const Tangle& t, Coeff c)
{
    if (t.circles() == 0)
    {
        DottedMorphism m(t, t);
        m.add(identity_surface(t), c);
        return m;
    }
    SegmentLayout L(t, t);
    CobGenerator g{t, t, {}};
    for (int k = 0; k < L.b; ++k)
        g.components.push_back({{L.dom_arc(k), L.cod_arc(k)}, 0, 0});
    for (int k = 0; k < L.cd; ++k)
        g.components.push_back({{L.dom_circle(k), L.cod_circle(k)}, 0, 0});
    return normalize(g, c);
}

// View of the t-th term of a morphism as an explicit generator.
inline CobGenerator generator_of(const DottedMorphism& m, std::size_t t)
{
    CobGenerator g{m.domain(), m.codomain(), {}};
    const Surface& s = m.terms()[t].first;
    g.components.resize(s.components());
    for (std::size_t i = 0; i < s.comp.size(); ++i)
        g.components[s.comp[i]].segments.push_back(static_cast<int>(i));
    for (std::size_t c = 0; c < g.components.size(); ++c)
        g.components[c].dots = (s.dots >> c) & 1;
    return g;
}

inline int degree(const CobGenerator& g)
{
    SegmentLayout L(g.domain, g.codomain);
    std::vector<int> owner(L.size(), -1);
    for (std::size_t i = 0; i < g.components.size(); ++i)
        for (int s : g.components[i].segments)
            owner[s] = static_cast<int>(i);
    std::vector<int> bc(g.components.size(), 0);
    for (int a : wall_cycles(g.domain, g.codomain))
        ++bc[owner[L.dom_arc(a)]];
    for (int s = 0; s < L.size(); ++s)
        if (L.is_circle(s))
            ++bc[owner[s]];
    int chi = 0, dots = 0;
    for (std::size_t i = 0; i < g.components.size(); ++i)
    {
        chi += 2 - 2 * g.components[i].genus - bc[i];
        dots += g.components[i].dots;
    }
    return chi - L.b - 2 * dots;
}

inline int degree(const Tangle& dom, const Tangle& cod, const Surface& s)
{
    int chi = 0;
    for (int x : component_chi(dom, cod, s))
        chi += x;
    return chi - dom.arcs() - 2 * std::popcount(s.dots);
}

// Degree of a homogeneous morphism; zero morphisms report 0.
inline int degree(const DottedMorphism& m)
{
    if (m.is_zero())
        return 0;
    int d = degree(m.domain(), m.codomain(), m.terms().front().first);
    for (auto& t : m.terms())
        if (degree(m.domain(), m.codomain(), t.first) != d)
            throw InvariantViolation("inhomogeneous morphism");
    return d;
}

// Vertical composition g o f.
inline DottedMorphism compose(const DottedMorphism& g, const DottedMorphism& f)
{
    if (!(f.codomain() == g.domain()))
        throw InvariantViolation("compose: codomain of f " + f.codomain().to_string() +
                                 " differs from domain of g " + g.domain().to_string(),
                                 "incompatible_tangles");
    DottedMorphism out(f.domain(), g.codomain());
    if (f.is_zero() || g.is_zero())
        return out;
    const Tangle& A = f.domain();
    const Tangle& B = f.codomain();
    const Tangle& C = g.codomain();
    SegmentLayout LF(A, B), LG(B, C), LR(A, C);
    std::vector<std::vector<int>> chi_f, chi_g;
    for (auto& t : f.terms())
        chi_f.push_back(component_chi(A, B, t.first));
    for (auto& t : g.terms())
        chi_g.push_back(component_chi(B, C, t.first));
    for (std::size_t i = 0; i < f.terms().size(); ++i)
    {
        const Surface& sf = f.terms()[i].first;
        for (std::size_t j = 0; j < g.terms().size(); ++j)
        {
            const Surface& sg = g.terms()[j].first;
            SurfaceBuilder sb(A, C);
            std::vector<int> pf(chi_f[i].size()), pg(chi_g[j].size());
            for (std::size_t c = 0; c < pf.size(); ++c)
                pf[c] = sb.add_piece(chi_f[i][c], (sf.dots >> c) & 1);
            for (std::size_t c = 0; c < pg.size(); ++c)
                pg[c] = sb.add_piece(chi_g[j][c], (sg.dots >> c) & 1);
            for (int k = 0; k < LF.b; ++k)
                sb.glue(pf[sf.comp[LF.cod_arc(k)]], pg[sg.comp[LG.dom_arc(k)]], 1);
            for (int c = 0; c < LF.cc; ++c)
                sb.glue(pf[sf.comp[LF.cod_circle(c)]], pg[sg.comp[LG.dom_circle(c)]], 0);
            for (int s = 0; s < LF.domain_size(); ++s)
                sb.attach(s, pf[sf.comp[s]]);
            for (int s = 0; s < LG.size() - LG.domain_size(); ++s)
                sb.attach(LR.domain_size() + s, pg[sg.comp[LG.domain_size() + s]]);
            sb.emit(checked_mul(f.terms()[i].second, g.terms()[j].second), out);
        }
    }
    return out;
}

// Turn every surface upside down (swap domain and codomain).
inline DottedMorphism reflect(const DottedMorphism& m)
{
    DottedMorphism out(m.codomain(), m.domain());
    SegmentLayout L(m.domain(), m.codomain());
    for (auto& [s, c] : m.terms())
    {
        std::vector<int> comp;
        for (int i = L.domain_size(); i < L.size(); ++i)
            comp.push_back(s.comp[i]);
        for (int i = 0; i < L.domain_size(); ++i)
            comp.push_back(s.comp[i]);
        std::vector<int> dots(s.components());
        for (std::size_t k = 0; k < dots.size(); ++k)
            dots[k] = (s.dots >> k) & 1;
        out.add(canonical_surface(comp, dots), c);
    }
    return out;
}

// Precompose with circle births and postcompose with circle deaths, which is
// the delooping conjugation Psi o f o Psi^{-1} for one choice of labels.
// A label of -1 ("x") on a domain circle means the dotted cup; +1 ("1") on a
// codomain circle means the dotted cap.
inline DottedMorphism cap_circles(const DottedMorphism& f, const std::vector<int>& dom_labels,
                                  const std::vector<int>& cod_labels)
{
    const Tangle& A = f.domain();
    const Tangle& B = f.codomain();
    Tangle A0 = A.with_circles(0), B0 = B.with_circles(0);
    DottedMorphism out(A0, B0);
    SegmentLayout L(A, B), L0(A0, B0);
    for (auto& [s, coeff] : f.terms())
    {
        auto chi = component_chi(A, B, s);
        SurfaceBuilder sb(A0, B0);
        std::vector<int> pc(chi.size());
        for (std::size_t c = 0; c < chi.size(); ++c)
            pc[c] = sb.add_piece(chi[c], (s.dots >> c) & 1);
        for (int c = 0; c < L.cd; ++c)
        {
            int disk = sb.add_piece(1, dom_labels[c] < 0 ? 1 : 0);
            sb.glue(pc[s.comp[L.dom_circle(c)]], disk, 0);
        }
        for (int c = 0; c < L.cc; ++c)
        {
            int disk = sb.add_piece(1, cod_labels[c] > 0 ? 1 : 0);
            sb.glue(pc[s.comp[L.cod_circle(c)]], disk, 0);
        }
        for (int k = 0; k < L.b; ++k)
        {
            sb.attach(L0.dom_arc(k), pc[s.comp[L.dom_arc(k)]]);
            sb.attach(L0.cod_arc(k), pc[s.comp[L.cod_arc(k)]]);
        }
        sb.emit(coeff, out);
    }
    return out;
}

} // namespace khmorse

#endif
