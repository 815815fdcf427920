// Library walk-through: a two-strand minimal complex, the homology of a
// few closures, and one parameter reduction with its trace.
#include <iostream>

#include <khmorse/braid_expr.hpp>
#include <khmorse/reduce.hpp>
#include <khmorse/torus.hpp>

using namespace khmorse;

int main()
{
    std::cout << "Minimal complex of s1^4 (hdeg, qshift):\n";
    BasedComplex T2 = minimal_complex_T2(4);
    for (CellId c = 0; c < static_cast<CellId>(T2.size()); ++c)
        std::cout << "  " << T2.cell(c).label << "  (" << T2.hdeg(c) << ", " << T2.qshift(c) << ")\n";

    for (const char* text : {"(s1)^3", "s1 s2' s1 s2'", "(s1 s2)^4"})
    {
        BraidWord w = parse_braid_word(text);
        BigradedHomology H = closure_homology(w);
        std::cout << "\nKhovanov homology of the closure of " << text << ":\n" << homology_table(H);
        std::cout << "graded Euler characteristic: " << graded_euler_characteristic(H).to_string() << "\n";
    }

    // Reduce a few nonzero positions of L(9, 0) in the omega4 diagram and
    // compare the groups on both sides.
    DiagramContext c = omega4_context();
    BigradedHomology big = link_homology(c, 9, 0);
    std::cout << "\nReductions in the omega4 diagram, starting from k = 9, m = 0:\n";
    int shown = 0;
    for (auto& [ij, g] : big)
    {
        if (shown++ % 3)
            continue;
        Reduction r = reduce_parameters({ij.first, ij.second, 9, 0, 0, 0}, c);
        std::cout << "  (" << ij.first << ", " << ij.second << ")";
        for (auto& st : r.trace)
            std::cout << " -" << st.rule << "-> (" << st.after.i << ", " << st.after.j << ", k=" << st.after.k
                      << ", m=" << st.after.m << ")";
        BigradedHomology small = link_homology(c, r.output.k, r.output.m);
        std::cout << "\n    " << g.to_string() << " = " << group_at(small, r.output.i, r.output.j).to_string()
                  << "\n";
    }
    return 0;
}
