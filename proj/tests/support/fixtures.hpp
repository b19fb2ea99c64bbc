#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mwpdiv/types.hpp"

namespace mwpdiv::testing {

/// A real-world near-duplicate family: one sentence pattern instantiated
/// with different speeds/times and two question phrasings. After
/// normalization every member must collapse to the same token sequence.
inline std::vector<ProblemRecord> duplicate_family() {
    struct Item {
        int speed;
        int secs;
        bool what_is;  // "What is ..." vs "Find ..."
    };
    const std::vector<Item> items = {
        {100, 18, true}, {100, 9, true},  {108, 7, false}, {110, 9, true},
        {120, 12, true}, {120, 18, true}, {120, 9, false}, {126, 9, false},
        {142, 12, false}, {162, 9, false}, {180, 18, true}, {180, 36, true},
        {180, 7, true},  {180, 8, false}, {180, 9, false},
    };
    std::vector<ProblemRecord> out;
    int n = 0;
    for (const auto& it : items) {
        ProblemRecord r;
        r.id = "train-" + std::to_string(++n);
        r.body = "A train running at the speed of " + std::to_string(it.speed) +
                 " km/hr crosses a pole in " + std::to_string(it.secs) + " seconds.";
        r.question = it.what_is ? "What is the length of the train ?"
                                : "Find the length of the train ?";
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace mwpdiv::testing
