/*
 * pipeline.hpp
 *
 * Integral Khovanov homology of braid closures and of planar assemblies of
 * braids, computed locally: the word is cut into blocks, each block is
 * replaced by a small complex (a torus Morse complex where one applies,
 * otherwise a Gaussian-eliminated cube), blocks are glued one at a time
 * with a stacking diagram and simplified after every gluing, and only then
 * closed up, delooped and handed to Smith normal form.
 *
 * Recognised runs:
 *   (s_g s_{g+1})^k, k >= 2     three-strand torus complex on strands g..g+2
 *   (s_g' s_{g+1}')^k, k >= 2   its dual (the mirror run)
 *   s_g^m or s_g'^m, m >= 2     two-strand torus complex or its dual
 * Everything else is grouped into chunks of at most `chunk` letters.
 */
#ifndef KHMORSE_PIPELINE_HPP
#define KHMORSE_PIPELINE_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "homology.hpp"
#include "planar.hpp"
#include "torus.hpp"

namespace khmorse
{

struct PipelineOptions
{
    bool use_torus = true;  // replace recognised runs by their Morse complexes
    bool eliminate = true;  // Gaussian elimination after every gluing
    int chunk = 4;          // letters per generic block
    std::size_t budget = std::size_t(1) << 20; // cells allowed in any intermediate complex
    unsigned threads = 1;
};

struct BraidBlock
{
    enum class Kind
    {
        generic,
        t2,
        t2_dual,
        t3,
        t3_dual
    };
    Kind kind = Kind::generic;
    BlockSpan span;
    int power = 0;   // m or k for torus blocks
    BraidWord word;  // the block's letters, renumbered onto its span

    std::string to_string() const
    {
        switch (kind)
        {
        case Kind::t2:
            return "T2(" + std::to_string(power) + ")@" + std::to_string(span.offset);
        case Kind::t2_dual:
            return "T2'(" + std::to_string(power) + ")@" + std::to_string(span.offset);
        case Kind::t3:
            return "T3(" + std::to_string(power) + ")@" + std::to_string(span.offset);
        case Kind::t3_dual:
            return "T3'(" + std::to_string(power) + ")@" + std::to_string(span.offset);
        default:
            return "[" + word.to_string() + "]@" + std::to_string(span.offset);
        }
    }
};

namespace detail
{

inline BraidWord restrict_word(const std::vector<Letter>& ls, int offset, int width)
{
    BraidWord w(width, {});
    for (auto l : ls)
        w.letters.push_back({l.gen - offset, l.exponent});
    w.validate();
    return w;
}

inline BraidBlock generic_block(const std::vector<Letter>& ls)
{
    int lo = ls.front().gen, hi = ls.front().gen;
    for (auto& l : ls)
        lo = std::min(lo, l.gen), hi = std::max(hi, l.gen);
    BraidBlock b;
    b.span = {lo - 1, hi - lo + 2};
    b.word = restrict_word(ls, lo - 1, hi - lo + 2);
    return b;
}

// Length (in letters) of the run (s_g^e s_{g+1}^e)^k starting at p.
inline int t3_run(const std::vector<Letter>& ls, std::size_t p)
{
    if (p + 1 >= ls.size())
        return 0;
    Letter a = ls[p], b = ls[p + 1];
    if (b.gen != a.gen + 1 || a.exponent != b.exponent)
        return 0;
    std::size_t q = p;
    while (q + 1 < ls.size() && ls[q] == a && ls[q + 1] == b)
        q += 2;
    return static_cast<int>(q - p);
}

inline int t2_run(const std::vector<Letter>& ls, std::size_t p)
{
    std::size_t q = p;
    while (q < ls.size() && ls[q] == ls[p])
        ++q;
    return static_cast<int>(q - p);
}

} // namespace detail

inline std::vector<BraidBlock> split_blocks(const BraidWord& w, const PipelineOptions& opt = {})
{
    std::vector<BraidBlock> out;
    std::vector<Letter> pending;
    auto flush = [&] {
        if (!pending.empty())
            out.push_back(detail::generic_block(pending));
        pending.clear();
    };
    const auto& ls = w.letters;
    std::size_t p = 0;
    while (p < ls.size())
    {
        if (opt.use_torus)
        {
            int r3 = detail::t3_run(ls, p);
            int r2 = detail::t2_run(ls, p);
            if (r3 >= 4 && r3 >= r2)
            {
                flush();
                BraidBlock b;
                b.kind = ls[p].exponent > 0 ? BraidBlock::Kind::t3 : BraidBlock::Kind::t3_dual;
                b.power = r3 / 2;
                b.span = {ls[p].gen - 1, 3};
                b.word = detail::restrict_word({ls.begin() + p, ls.begin() + p + r3}, ls[p].gen - 1, 3);
                out.push_back(b);
                p += r3;
                continue;
            }
            if (r2 >= 2)
            {
                flush();
                BraidBlock b;
                b.kind = ls[p].exponent > 0 ? BraidBlock::Kind::t2 : BraidBlock::Kind::t2_dual;
                b.power = r2;
                b.span = {ls[p].gen - 1, 2};
                b.word = detail::restrict_word({ls.begin() + p, ls.begin() + p + r2}, ls[p].gen - 1, 2);
                out.push_back(b);
                p += r2;
                continue;
            }
        }
        pending.push_back(ls[p++]);
        if (static_cast<int>(pending.size()) >= opt.chunk)
            flush();
    }
    flush();
    return out;
}

inline void check_budget(const BasedComplex& C, const PipelineOptions& opt, const char* where)
{
    if (C.size() > opt.budget)
        throw BudgetExceeded(std::string(where) + ": " + std::to_string(C.size()) + " cells exceed the budget of " +
                             std::to_string(opt.budget));
}

// Deloop and, if enabled, eliminate.
inline BasedComplex simplify(const BasedComplex& C, const PipelineOptions& opt)
{
    BasedComplex D = deloop(C);
    check_budget(D, opt, "delooping");
    return opt.eliminate ? gaussian_eliminate(D) : D;
}

// Cells of a torus block, known before the complex is built.
inline std::size_t torus_block_cells(const BraidBlock& b)
{
    switch (b.kind)
    {
    case BraidBlock::Kind::t2:
    case BraidBlock::Kind::t2_dual:
        return static_cast<std::size_t>(b.power) + 1;
    case BraidBlock::Kind::t3:
    case BraidBlock::Kind::t3_dual:
        return t3_critical_words(b.power).size();
    default:
        return 0;
    }
}

// A delooped, circle-free complex for one block.
inline BasedComplex block_complex(const BraidBlock& b, const PipelineOptions& opt = {})
{
    if (torus_block_cells(b) > opt.budget)
        throw BudgetExceeded("block: " + b.to_string() + " has " + std::to_string(torus_block_cells(b)) +
                             " cells, over the budget of " + std::to_string(opt.budget));
    switch (b.kind)
    {
    case BraidBlock::Kind::t2:
        return minimal_complex_T2(b.power);
    case BraidBlock::Kind::t2_dual:
        return dual(minimal_complex_T2(b.power));
    case BraidBlock::Kind::t3:
        return minimal_complex_T3(b.power);
    case BraidBlock::Kind::t3_dual:
        return dual(minimal_complex_T3(b.power));
    default:
        return simplify(khovanov_complex(b.word, opt.budget), opt);
    }
}

// The complex with a single cell holding tangle t in degree (0, 0).
inline BasedComplex unit_complex(const Tangle& t)
{
    BasedComplex C;
    C.add_cell(Cell{0, 0, t, "", {}});
    return C;
}

// Reduced complex of an open braid (2n boundary points, circle free).
inline BasedComplex braid_complex(const BraidWord& w, const PipelineOptions& opt = {})
{
    int n = w.strands;
    BasedComplex C = unit_complex(Tangle::identity_braid(n));
    for (auto& b : split_blocks(w, opt))
    {
        BasedComplex B = block_complex(b, opt);
        check_budget(B, opt, "block");
        if (C.size() * B.size() > opt.budget)
            throw BudgetExceeded("gluing " + b.to_string() + " would need " + std::to_string(C.size() * B.size()) +
                                 " cells");
        C = simplify(compose_complexes(braid_diagram(n, {{0, n}, b.span}), {&C, &B}, opt.budget), opt);
    }
    return C;
}

// Homology of D(C_1, ..., C_n) for a diagram without outer boundary.
inline BigradedHomology assembly_homology(const PlanarArcDiagram& D, const std::vector<const BasedComplex*>& inputs,
                                          const PipelineOptions& opt = {})
{
    if (D.outer() != 0)
        throw InvariantViolation("homology needs a diagram without outer boundary", "outer_boundary");
    std::size_t cells = 1;
    for (auto* c : inputs)
        cells *= c->size();
    if (cells > opt.budget)
        throw BudgetExceeded("assembly would have " + std::to_string(cells) + " cells");
    BasedComplex X = simplify(compose_complexes(D, inputs, opt.budget), opt);
    return homology(apply_tqft(X), opt.threads);
}

inline BigradedHomology closure_homology(const BraidWord& w, const PipelineOptions& opt = {})
{
    BasedComplex C = braid_complex(w, opt);
    return assembly_homology(closure(w.strands), {&C}, opt);
}

// Homology of D(A, B, C) for braids on the input discs; an input with no
// boundary points takes the empty tangle.
inline BigradedHomology diagram_homology(const PlanarArcDiagram& D, const std::vector<BraidWord>& words,
                                         const PipelineOptions& opt = {})
{
    if (static_cast<int>(words.size()) != D.arity())
        throw InvariantViolation("one braid word per input expected", "arity_mismatch");
    std::vector<BasedComplex> cs;
    for (int d = 0; d < D.arity(); ++d)
    {
        if (D.inputs()[d] == 0)
            cs.push_back(unit_complex(Tangle::empty()));
        else
        {
            if (2 * words[d].strands != D.inputs()[d])
                throw InvariantViolation("braid on input " + std::to_string(d) + " has the wrong number of strands",
                                         "boundary_mismatch");
            cs.push_back(braid_complex(words[d], opt));
        }
    }
    std::vector<const BasedComplex*> ptrs;
    for (auto& c : cs)
        ptrs.push_back(&c);
    return assembly_homology(D, ptrs, opt);
}

} // namespace khmorse

#endif
