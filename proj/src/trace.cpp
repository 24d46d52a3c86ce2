#include "flywheel/trace.hpp"

namespace flywheel {

std::vector<double> EnergyTrace::energies() const {
    std::vector<double> out;
    out.reserve(entries.size());
    for (const TraceEntry& e : entries) {
        out.push_back(e.e_j);
    }
    return out;
}

} // namespace flywheel
