// Prints the built-in three-input diagrams in the JSON form read by
// `khmorse homology --diagram`.
#include <iostream>

#include <khmorse/planar_io.hpp>

int main()
{
    std::cout << "omega4: " << khmorse::to_json(khmorse::omega4_diagram()).dump() << "\n";
    std::cout << "omega5: " << khmorse::to_json(khmorse::omega5_diagram()).dump() << "\n";
    return 0;
}
