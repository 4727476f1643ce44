#include "xcube/bitvec.hpp"

#include <map>

namespace xcube {

namespace {

// Eliminate `row` against the pivot table; insert it if independent.
bool reduce_and_insert(std::map<int, BitVec>& pivots, BitVec row) {
    for (;;) {
        const int p = row.lowest_set();
        if (p < 0) return false;
        auto it = pivots.find(p);
        if (it == pivots.end()) {
            pivots.emplace(p, std::move(row));
            return true;
        }
        row ^= it->second;
    }
}

}  // namespace

std::size_t gf2_rank(std::vector<BitVec> rows) {
    std::map<int, BitVec> pivots;
    std::size_t rank = 0;
    for (auto& r : rows)
        if (reduce_and_insert(pivots, std::move(r))) ++rank;
    return rank;
}

std::vector<BitVec> gf2_reduce(std::vector<BitVec> rows) {
    std::map<int, BitVec> pivots;
    std::vector<BitVec> basis;
    for (auto& r : rows) {
        BitVec copy = r;
        if (reduce_and_insert(pivots, std::move(copy))) basis.push_back(r);
    }
    return basis;
}

}  // namespace xcube
