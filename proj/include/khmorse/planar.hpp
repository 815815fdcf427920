/*
 * planar.hpp
 *
 * Planar arc diagrams and their action on crossingless tangles and on based
 * complexes.
 *
 * A diagram is stored combinatorially.  Disc -1 is the outer boundary and
 * discs 0..n-1 are the input holes.  Every boundary point is an Endpoint
 * (disc, pos), with positions read clockwise around each disc.  A basepoint
 * per disc fixes which position is index 0 of the tangle placed there, so
 * tangle index t on disc d sits at pos (t + basepoint[d]) mod size.
 *
 * Planarity is checked through the rotation system of the graph whose
 * vertices are the discs and whose edges are the arcs: each connected
 * component must satisfy V - E + F = 2 with F counted as orbits of
 * "follow the arc, then step to the next boundary point".  The outer disc is
 * walked in the opposite direction since it is seen from inside.
 *
 * Braid blocks are glued with braid_diagram().  A block of width w at offset
 * o covers strands o..o+w-1 and is a tangle with 2w points in the usual
 * order (tops 0..w-1 left to right, then bottoms right to left).
 */
#ifndef KHMORSE_PLANAR_HPP
#define KHMORSE_PLANAR_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cube.hpp"

namespace khmorse
{

constexpr int outer_disc = -1;

struct Endpoint
{
    int disc = outer_disc;
    int pos = 0;

    auto operator<=>(const Endpoint&) const = default;
    bool operator==(const Endpoint&) const = default;
};

class PlanarArcDiagram
{
public:
    using Arc = std::pair<Endpoint, Endpoint>;

    PlanarArcDiagram() = default;

    PlanarArcDiagram(int outer, std::vector<int> inputs, std::vector<Arc> arcs, int loops = 0,
                     std::vector<int> basepoints = {})
        : outer_(outer), inputs_(std::move(inputs)), arcs_(std::move(arcs)), loops_(loops),
          basepoints_(std::move(basepoints))
    {
        if (basepoints_.empty())
            basepoints_.assign(inputs_.size() + 1, 0);
        validate();
    }

    int outer() const { return outer_; }
    const std::vector<int>& inputs() const { return inputs_; }
    int arity() const { return static_cast<int>(inputs_.size()); }
    const std::vector<Arc>& arcs() const { return arcs_; }
    int loops() const { return loops_; }
    const std::vector<int>& basepoints() const { return basepoints_; }
    int basepoint(int disc) const { return basepoints_[disc + 1]; }

    int disc_size(int disc) const { return disc == outer_disc ? outer_ : inputs_[disc]; }

    // Arc index at an endpoint.
    int arc_at(Endpoint e) const { return arc_at_[slot(e)]; }

    Endpoint other_end(Endpoint e) const
    {
        const Arc& a = arcs_[arc_at(e)];
        return a.first == e ? a.second : a.first;
    }

    int tangle_index(Endpoint e) const
    {
        int n = disc_size(e.disc);
        return ((e.pos - basepoint(e.disc)) % n + n) % n;
    }

    Endpoint endpoint_of(int disc, int index) const
    {
        return {disc, (index + basepoint(disc)) % disc_size(disc)};
    }

    bool operator==(const PlanarArcDiagram&) const = default;

private:
    int slot(Endpoint e) const { return offset_[e.disc + 1] + e.pos; }

    void validate()
    {
        if (outer_ < 0 || outer_ % 2)
            throw InvariantViolation("outer boundary must have an even number of points", "bad_diagram");
        for (int s : inputs_)
            if (s < 0 || s % 2)
                throw InvariantViolation("input disc with an odd number of points", "bad_diagram");
        if (loops_ < 0)
            throw InvariantViolation("negative loop count", "bad_diagram");
        if (basepoints_.size() != inputs_.size() + 1)
            throw InvariantViolation("one basepoint per disc expected (outer first)", "bad_diagram");
        offset_.assign(inputs_.size() + 2, 0);
        offset_[1] = outer_;
        for (std::size_t d = 0; d < inputs_.size(); ++d)
            offset_[d + 2] = offset_[d + 1] + inputs_[d];
        for (int d = outer_disc; d < arity(); ++d)
        {
            int b = basepoints_[d + 1];
            if (b < 0 || (disc_size(d) > 0 && b >= disc_size(d)) || (disc_size(d) == 0 && b != 0))
                throw InvariantViolation("basepoint out of range", "bad_diagram");
        }
        arc_at_.assign(offset_.back(), -1);
        for (std::size_t k = 0; k < arcs_.size(); ++k)
            for (Endpoint e : {arcs_[k].first, arcs_[k].second})
            {
                if (e.disc < outer_disc || e.disc >= arity() || e.pos < 0 || e.pos >= disc_size(e.disc))
                    throw InvariantViolation("arc endpoint outside the diagram", "bad_diagram");
                int& a = arc_at_[slot(e)];
                if (a >= 0)
                    throw InvariantViolation("boundary point used by two arcs", "bad_diagram");
                a = static_cast<int>(k);
            }
        for (int a : arc_at_)
            if (a < 0)
                throw InvariantViolation("boundary point without an arc", "bad_diagram");
        check_planar();
    }

    void check_planar() const
    {
        int total = offset_.back();
        std::vector<Endpoint> at(total);
        for (int d = outer_disc; d < arity(); ++d)
            for (int p = 0; p < disc_size(d); ++p)
                at[offset_[d + 1] + p] = {d, p};
        // Connected components of discs joined by arcs.
        std::vector<int> parent(arity() + 1);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        for (auto& [a, b] : arcs_)
            parent[find(a.disc + 1)] = find(b.disc + 1);
        std::vector<int> discs(arity() + 1, 0), edges(arity() + 1, 0), faces(arity() + 1, 0);
        for (int d = 0; d <= arity(); ++d)
            if (disc_size(d - 1) > 0)
                ++discs[find(d)];
        for (auto& a : arcs_)
            ++edges[find(a.first.disc + 1)];
        std::vector<char> seen(total, 0);
        for (int s = 0; s < total; ++s)
        {
            if (seen[s])
                continue;
            ++faces[find(at[s].disc + 1)];
            int x = s;
            while (!seen[x])
            {
                seen[x] = 1;
                Endpoint o = other_end(at[x]);
                int n = disc_size(o.disc);
                int step = o.disc == outer_disc ? n - 1 : 1;
                x = slot({o.disc, (o.pos + step) % n});
            }
        }
        for (int r = 0; r <= arity(); ++r)
            if (find(r) == r && discs[r] > 0 && faces[r] - edges[r] != 2 - discs[r])
                throw InvariantViolation("arcs of the diagram cross", "nonplanar_diagram");
    }

    int outer_ = 0;
    std::vector<int> inputs_;
    std::vector<Arc> arcs_;
    int loops_ = 0;
    std::vector<int> basepoints_;
    std::vector<int> offset_;
    std::vector<int> arc_at_;
};

// ---------------------------------------------------------------------------
// Tangles

// Result of gluing tangles into a diagram.  seg_arc lists, for each segment
// of the glued tangle (arcs in Tangle order, then circles), one diagram arc
// lying on it, or -1 - l for the l-th free loop of the diagram.
struct ComposedTangle
{
    Tangle tangle;
    std::vector<int> seg_arc;
};

inline void check_inputs(const PlanarArcDiagram& D, const std::vector<Tangle>& ts)
{
    if (static_cast<int>(ts.size()) != D.arity())
        throw InvariantViolation("diagram has " + std::to_string(D.arity()) + " inputs, got " +
                                     std::to_string(ts.size()),
                                 "arity_mismatch");
    for (int d = 0; d < D.arity(); ++d)
        if (ts[d].points() != D.inputs()[d])
            throw InvariantViolation("input " + std::to_string(d) + " has " + std::to_string(ts[d].points()) +
                                         " boundary points, disc has " + std::to_string(D.inputs()[d]),
                                     "boundary_mismatch");
}

inline ComposedTangle compose_tangles(const PlanarArcDiagram& D, const std::vector<Tangle>& ts)
{
    check_inputs(D, ts);
    std::uint32_t extra = 0;
    for (auto& t : ts)
        extra += t.circles();
    std::vector<char> used(D.arcs().size(), 0);
    // Walk from endpoint e across its arc and through input tangles until
    // the outer boundary (or e itself) is reached.
    auto walk = [&](Endpoint e) {
        while (true)
        {
            used[D.arc_at(e)] = 1;
            Endpoint o = D.other_end(e);
            if (o.disc == outer_disc)
                return o;
            const Tangle& t = ts[o.disc];
            e = D.endpoint_of(o.disc, t.partner(D.tangle_index(o)));
            if (used[D.arc_at(e)])
                return o;
        }
    };
    int n = D.outer();
    std::vector<std::uint8_t> pairing(n);
    std::vector<int> first_arc(n);
    for (int t = 0; t < n; ++t)
    {
        Endpoint e = D.endpoint_of(outer_disc, t);
        first_arc[t] = D.arc_at(e);
        if (used[first_arc[t]])
            continue;
        Endpoint end = walk(e);
        int u = D.tangle_index(end);
        pairing[t] = static_cast<std::uint8_t>(u);
        pairing[u] = static_cast<std::uint8_t>(t);
    }
    ComposedTangle out;
    std::vector<int> circles;
    for (std::size_t a = 0; a < D.arcs().size(); ++a)
        if (!used[a])
        {
            circles.push_back(static_cast<int>(a));
            walk(D.arcs()[a].first);
        }
    out.tangle = Tangle(std::move(pairing), static_cast<std::uint32_t>(circles.size() + D.loops()) + extra);
    for (int k = 0; k < out.tangle.arcs(); ++k)
        out.seg_arc.push_back(first_arc[out.tangle.arc(k).first]);
    out.seg_arc.insert(out.seg_arc.end(), circles.begin(), circles.end());
    for (int l = 0; l < D.loops(); ++l)
        out.seg_arc.push_back(-1 - l);
    return out;
}

// ---------------------------------------------------------------------------
// Morphisms and complexes

// D(id, ..., f, ..., id) with f in input `slot`; the other inputs hold
// `objects`.  All input objects must be circle free.
inline DottedMorphism glue_morphism(const PlanarArcDiagram& D, std::vector<Tangle> objects, int slot,
                                    const DottedMorphism& f)
{
    for (auto& t : objects)
        if (t.circles())
            throw InvariantViolation("glue_morphism needs circle-free inputs; deloop first", "not_delooped");
    if (f.domain().circles() || f.codomain().circles())
        throw InvariantViolation("glue_morphism needs circle-free inputs; deloop first", "not_delooped");
    objects[slot] = f.domain();
    ComposedTangle dom = compose_tangles(D, objects);
    objects[slot] = f.codomain();
    ComposedTangle cod = compose_tangles(D, objects);
    DottedMorphism out(dom.tangle, cod.tangle);
    const Tangle& A = f.domain();
    const Tangle& B = f.codomain();
    SegmentLayout LF(A, B), LR(dom.tangle, cod.tangle);
    for (auto& [s, coeff] : f.terms())
    {
        SurfaceBuilder sb(dom.tangle, cod.tangle);
        auto chi = component_chi(A, B, s);
        std::vector<int> fp(chi.size());
        for (std::size_t c = 0; c < chi.size(); ++c)
            fp[c] = sb.add_piece(chi[c], (s.dots >> c) & 1);
        std::vector<int> strip(D.arcs().size());
        for (auto& p : strip)
            p = sb.add_piece(1, 0);
        std::vector<std::vector<int>> other(D.arity());
        for (int d = 0; d < D.arity(); ++d)
            if (d != slot)
                for (int k = 0; k < objects[d].arcs(); ++k)
                    other[d].push_back(sb.add_piece(1, 0));
        std::vector<int> loop(D.loops());
        for (auto& p : loop)
            p = sb.add_piece(0, 0);
        for (std::size_t a = 0; a < D.arcs().size(); ++a)
            for (Endpoint e : {D.arcs()[a].first, D.arcs()[a].second})
            {
                if (e.disc == outer_disc)
                    continue;
                int x = D.tangle_index(e);
                int piece = e.disc == slot ? fp[s.comp[LF.dom_arc(A.arc_of(x))]] : other[e.disc][objects[e.disc].arc_of(x)];
                sb.glue(static_cast<int>(strip[a]), piece, 1);
            }
        auto piece_of = [&](int g) { return g >= 0 ? strip[g] : loop[-1 - g]; };
        for (std::size_t k = 0; k < dom.seg_arc.size(); ++k)
            sb.attach(static_cast<int>(k), piece_of(dom.seg_arc[k]));
        for (std::size_t k = 0; k < cod.seg_arc.size(); ++k)
            sb.attach(LR.domain_size() + static_cast<int>(k), piece_of(cod.seg_arc[k]));
        sb.emit(coeff, out);
    }
    return out;
}

// D(C_1, ..., C_n): cells are tuples (first input most significant), the
// differential in slot i carries the sign (-1)^(hdeg_1 + ... + hdeg_{i-1}).
// Input objects must be circle free; the result usually has circles.
inline BasedComplex compose_complexes(const PlanarArcDiagram& D, const std::vector<const BasedComplex*>& Cs,
                                      std::size_t budget = std::size_t(1) << 22)
{
    int n = D.arity();
    if (static_cast<int>(Cs.size()) != n)
        throw InvariantViolation("diagram has " + std::to_string(n) + " inputs, got " + std::to_string(Cs.size()),
                                 "arity_mismatch");
    std::vector<std::size_t> stride(n + 1, 1);
    for (int i = n - 1; i >= 0; --i)
    {
        stride[i] = stride[i + 1] * Cs[i]->size();
        if (Cs[i]->size() && stride[i] / Cs[i]->size() != stride[i + 1])
            throw BudgetExceeded("composed complex too large");
    }
    std::size_t total = stride[0];
    if (total > budget)
        throw BudgetExceeded("composed complex would have " + std::to_string(total) + " cells");
    BasedComplex out;
    std::vector<Tangle> objs(n);
    std::vector<CellId> idx(n);
    auto unpack = [&](std::size_t id) {
        for (int i = 0; i < n; ++i)
            idx[i] = static_cast<CellId>((id / stride[i + 1]) % Cs[i]->size());
    };
    for (std::size_t id = 0; id < total; ++id)
    {
        unpack(id);
        Cell c;
        c.label = "";
        for (int i = 0; i < n; ++i)
        {
            const Cell& ci = Cs[i]->cell(idx[i]);
            c.hdeg += ci.hdeg;
            c.qshift += ci.qshift;
            objs[i] = ci.object;
            c.label += (i ? "|" : "") + ci.label;
        }
        c.label = "(" + c.label + ")";
        c.object = compose_tangles(D, objs).tangle;
        out.add_cell(std::move(c));
    }
    for (std::size_t id = 0; id < total; ++id)
    {
        unpack(id);
        for (int i = 0; i < n; ++i)
            objs[i] = Cs[i]->object(idx[i]);
        int before = 0;
        for (int i = 0; i < n; ++i)
        {
            int sign = before % 2 ? -1 : 1;
            for (auto& [t, f] : Cs[i]->row(idx[i]))
            {
                std::size_t to = id + (static_cast<std::size_t>(t) - static_cast<std::size_t>(idx[i])) * stride[i + 1];
                out.add_entry(static_cast<CellId>(id), static_cast<CellId>(to), glue_morphism(D, objs, i, f) * sign);
            }
            before += Cs[i]->hdeg(idx[i]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Standard diagrams

// Placement of a braid block on strands offset..offset+width-1.
struct BlockSpan
{
    int offset = 0;
    int width = 1;
};

// Stack blocks bottom to top inside an n-strand braid.  Input d is block d.
inline PlanarArcDiagram braid_diagram(int strands, const std::vector<BlockSpan>& blocks)
{
    std::vector<Endpoint> open(strands);
    for (int j = 0; j < strands; ++j)
        open[j] = {outer_disc, 2 * strands - 1 - j};
    std::vector<PlanarArcDiagram::Arc> arcs;
    std::vector<int> inputs;
    for (std::size_t d = 0; d < blocks.size(); ++d)
    {
        auto [o, w] = blocks[d];
        if (o < 0 || w < 1 || o + w > strands)
            throw InvariantViolation("block does not fit in the braid", "bad_diagram");
        inputs.push_back(2 * w);
        for (int j = 0; j < w; ++j)
        {
            arcs.push_back({open[o + j], {static_cast<int>(d), 2 * w - 1 - j}});
            open[o + j] = {static_cast<int>(d), j};
        }
    }
    for (int j = 0; j < strands; ++j)
        arcs.push_back({open[j], {outer_disc, j}});
    return PlanarArcDiagram(2 * strands, std::move(inputs), std::move(arcs));
}

// Identity: one input of 2b points wired straight to the outer boundary.
inline PlanarArcDiagram identity_diagram(int points)
{
    std::vector<PlanarArcDiagram::Arc> arcs;
    for (int p = 0; p < points; ++p)
        arcs.push_back({{outer_disc, p}, {0, p}});
    return PlanarArcDiagram(points, {points}, std::move(arcs));
}

// Trace closure of an n-strand braid: top of strand j meets its bottom.
inline PlanarArcDiagram closure(int strands)
{
    std::vector<PlanarArcDiagram::Arc> arcs;
    for (int j = 1; j <= strands; ++j)
        arcs.push_back({{0, j - 1}, {0, 2 * strands - j}});
    return PlanarArcDiagram(0, {2 * strands}, std::move(arcs));
}

inline PlanarArcDiagram closure(const BraidWord& w) { return closure(w.strands); }

// s(D) for a diagram without outer boundary.
inline int s_value(const PlanarArcDiagram& D)
{
    if (D.outer() != 0)
        throw InvariantViolation("s(D) needs a diagram without outer boundary", "outer_boundary");
    int same = 0, different = 0;
    for (auto& [a, b] : D.arcs())
        (a.disc == b.disc ? same : different) += 1;
    return same + different / 2 + D.loops();
}

// Left-right mirror.  On a disc with 2h points, pos p goes to h - 1 - p
// (mod 2h), which keeps the basepoint convention of braid tangles.
inline PlanarArcDiagram flip(const PlanarArcDiagram& D)
{
    auto mirror = [&](Endpoint e) {
        int n = D.disc_size(e.disc);
        int h = n / 2;
        return Endpoint{e.disc, ((h - 1 - e.pos) % n + n) % n};
    };
    std::vector<PlanarArcDiagram::Arc> arcs;
    for (auto& [a, b] : D.arcs())
        arcs.push_back({mirror(a), mirror(b)});
    // Index t sat at pos t + b and now sits at h - 1 - t - b, which is
    // index h - 1 - t of the mirrored tangle when the basepoint is -b.
    std::vector<int> bps;
    for (int d = outer_disc; d < D.arity(); ++d)
    {
        int n = D.disc_size(d);
        bps.push_back(n ? (n - D.basepoint(d)) % n : 0);
    }
    return PlanarArcDiagram(D.outer(), D.inputs(), std::move(arcs), D.loops(), std::move(bps));
}

// The same mirror on a crossingless tangle.
inline Tangle flip(const Tangle& t)
{
    int n = t.points(), h = n / 2;
    auto m = [&](int p) { return ((h - 1 - p) % n + n) % n; };
    std::vector<std::uint8_t> q(n);
    for (int p = 0; p < n; ++p)
        q[m(p)] = static_cast<std::uint8_t>(m(t.partner(p)));
    return Tangle(std::move(q), t.circles());
}

// Mirror of a braid word in a vertical line: sigma_i becomes sigma_{n-i}.
// Turning the picture over keeps every crossing of the same type.
inline BraidWord flip(const BraidWord& w)
{
    BraidWord r = w;
    for (auto& l : r.letters)
        l.gen = w.strands - l.gen;
    return r;
}

// Merging two inputs into one.  `slot` is absorbed into `into`; their
// connecting arcs must occupy one contiguous cyclic run on each disc.  The
// result is the reduced diagram D' together with the 2-input diagram E such
// that D'(.., E(X_into, X_slot), ..) = D(.., X_into, .., X_slot, ..).
struct MergeResult
{
    PlanarArcDiagram diagram;
    PlanarArcDiagram inner;
    int merged_slot = 0; // index of the new disc in diagram
};

inline MergeResult merge(const PlanarArcDiagram& D, int into, int slot)
{
    if (into == slot || into < 0 || slot < 0 || into >= D.arity() || slot >= D.arity())
        throw InvariantViolation("merge: bad input indices", "bad_diagram");
    int na = D.inputs()[into], nb = D.inputs()[slot];
    auto joins = [&](Endpoint e) { return D.other_end(e).disc == (e.disc == into ? slot : into); };
    // Free points of each disc, in cyclic order starting just after the
    // connecting run.
    auto free_points = [&](int disc, int n) {
        std::vector<int> run;
        for (int p = 0; p < n; ++p)
            if (joins({disc, p}))
                run.push_back(p);
        std::vector<int> out;
        if (run.empty())
        {
            for (int p = 0; p < n; ++p)
                out.push_back(p);
            return out;
        }
        int start = -1;
        for (int p : run)
            if (!joins({disc, (p + 1) % n}))
                start = (p + 1) % n;
        int runs = 0;
        for (int p = 0; p < n; ++p)
            runs += joins({disc, p}) && !joins({disc, (p + 1) % n});
        if (runs > 1)
            throw InvariantViolation("merge: connecting arcs are not contiguous", "unsupported_merge");
        if (start < 0)
            return out;
        for (int p = start; !joins({disc, p}); p = (p + 1) % n)
            out.push_back(p);
        return out;
    };
    bool connected = false;
    for (int p = 0; p < na; ++p)
        connected = connected || joins({into, p});
    if (!connected && na > 0 && nb > 0)
        throw InvariantViolation("merge: inputs are not joined by arcs", "unsupported_merge");
    std::vector<int> fa = free_points(into, na), fb = free_points(slot, nb);
    // New disc: free points of `into`, then those of `slot`.
    int m = static_cast<int>(fa.size() + fb.size());
    std::map<Endpoint, Endpoint> to_new; // old endpoint -> endpoint on the merged disc (outer of E)
    for (std::size_t k = 0; k < fa.size(); ++k)
        to_new[{into, fa[k]}] = {outer_disc, static_cast<int>(k)};
    for (std::size_t k = 0; k < fb.size(); ++k)
        to_new[{slot, fb[k]}] = {outer_disc, static_cast<int>(fa.size() + k)};

    // Inner diagram E: input 0 is `into`, input 1 is `slot`.
    std::vector<PlanarArcDiagram::Arc> inner_arcs;
    std::vector<PlanarArcDiagram::Arc> outer_arcs;
    int new_index = into - (slot < into);
    auto renumber = [&](int d) {
        if (d == outer_disc)
            return outer_disc;
        if (d == into)
            return new_index;
        return d - (d > slot);
    };
    for (auto& [a, b] : D.arcs())
    {
        bool ia = a.disc == into || a.disc == slot, ib = b.disc == into || b.disc == slot;
        auto local = [&](Endpoint e) { return Endpoint{e.disc == into ? 0 : 1, e.pos}; };
        if (ia && ib)
            inner_arcs.push_back({local(a), local(b)});
        else if (ia || ib)
        {
            Endpoint in = ia ? a : b, out = ia ? b : a;
            Endpoint nw = to_new.at(in);
            inner_arcs.push_back({local(in), nw});
            outer_arcs.push_back({{renumber(out.disc), out.pos}, {new_index, nw.pos}});
        }
        else
            outer_arcs.push_back({{renumber(a.disc), a.pos}, {renumber(b.disc), b.pos}});
    }
    std::vector<int> inputs, bps{D.basepoint(outer_disc)};
    for (int d = 0; d < D.arity(); ++d)
    {
        if (d == slot)
            continue;
        inputs.push_back(d == into ? m : D.inputs()[d]);
        bps.push_back(d == into ? 0 : D.basepoint(d));
    }
    MergeResult r{PlanarArcDiagram(D.outer(), std::move(inputs), std::move(outer_arcs), D.loops(), std::move(bps)),
                  PlanarArcDiagram(m, {na, nb}, std::move(inner_arcs), 0, {0, D.basepoint(into), D.basepoint(slot)}),
                  new_index};
    return r;
}

// ---------------------------------------------------------------------------
// Built-in three-input diagrams

// Inputs: A = (s1 s2)^k (6 points), B = a 2-strand braid (4 points), C an
// empty tangle.  D(A, B, C) is the closure of the product A B.
inline PlanarArcDiagram omega4_diagram()
{
    using E = Endpoint;
    return PlanarArcDiagram(0, {6, 4, 0},
                            {{E{0, 0}, E{1, 3}},
                             {E{0, 1}, E{1, 2}},
                             {E{1, 0}, E{0, 5}},
                             {E{1, 1}, E{0, 4}},
                             {E{0, 2}, E{0, 3}}});
}

// The flipped diagram: B sits on strands 2 and 3.
inline PlanarArcDiagram omega5_diagram() { return flip(omega4_diagram()); }

// Closure of A B T where A has 3 strands and B, T both act on strands 1, 2.
inline PlanarArcDiagram generic_closure3()
{
    PlanarArcDiagram stack = braid_diagram(3, {{0, 3}, {0, 2}, {0, 2}});
    // Close the stacked braid: glue its outer boundary to the closure arcs.
    std::vector<PlanarArcDiagram::Arc> arcs;
    std::map<int, Endpoint> at_outer;
    for (auto& [a, b] : stack.arcs())
    {
        if (a.disc == outer_disc && b.disc == outer_disc)
            throw InvariantViolation("unexpected free strand");
        if (a.disc == outer_disc)
            at_outer[a.pos] = b;
        else if (b.disc == outer_disc)
            at_outer[b.pos] = a;
        else
            arcs.push_back({a, b});
    }
    for (int j = 1; j <= 3; ++j)
        arcs.push_back({at_outer.at(j - 1), at_outer.at(6 - j)});
    return PlanarArcDiagram(0, stack.inputs(), std::move(arcs));
}

} // namespace khmorse

#endif
