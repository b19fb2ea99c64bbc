#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mwpdiv/rational.hpp"

namespace mwpdiv::testing {

struct RandomProgram {
    std::string text;
    std::vector<Rational> numbers;
    std::optional<Rational> expected;  // nullopt: a step divides by zero
};

/// Builds a random step list and evaluates it with an independent
/// stack-machine walk over the raw step descriptions (the oracle side of
/// the evaluate() property).
inline RandomProgram make_random_program(std::mt19937_64& rng, std::size_t max_steps) {
    static const char* kOps[4] = {"add", "subtract", "multiply", "divide"};
    std::uniform_int_distribution<int> op_pick(0, 3);
    std::uniform_int_distribution<int> value(1, 40);
    std::uniform_int_distribution<std::size_t> steps_pick(1, max_steps);

    const std::size_t steps = steps_pick(rng);
    RandomProgram out;
    const std::size_t number_count = 2 + steps;
    for (std::size_t i = 0; i < number_count; ++i) out.numbers.emplace_back(value(rng));

    struct Step {
        int op;
        bool a_is_step, b_is_step;
        std::size_t a, b;
    };
    std::vector<Step> plan;
    for (std::size_t s = 0; s < steps; ++s) {
        Step st;
        st.op = op_pick(rng);
        auto pick_operand = [&](bool& is_step, std::size_t& idx) {
            if (s > 0 && rng() % 3 == 0) {
                is_step = true;
                idx = rng() % s;
            } else {
                is_step = false;
                idx = rng() % number_count;
            }
        };
        pick_operand(st.a_is_step, st.a);
        pick_operand(st.b_is_step, st.b);
        plan.push_back(st);
    }

    // independent evaluation: explicit value stack per step
    std::vector<Rational> acc;
    bool divides_by_zero = false;
    for (const auto& st : plan) {
        const Rational a = st.a_is_step ? acc[st.a] : out.numbers[st.a];
        const Rational b = st.b_is_step ? acc[st.b] : out.numbers[st.b];
        Rational v;
        switch (st.op) {
            case 0: v = a + b; break;
            case 1: v = a - b; break;
            case 2: v = a * b; break;
            default:
                if (b == 0) divides_by_zero = true;
                else v = a / b;
                break;
        }
        acc.push_back(v);
        if (divides_by_zero) break;
    }
    if (!divides_by_zero) out.expected = acc.back();

    for (std::size_t s = 0; s < plan.size(); ++s) {
        const auto& st = plan[s];
        if (s > 0) out.text += ' ';
        out.text += kOps[st.op];
        out.text += '(';
        out.text += (st.a_is_step ? "#" : "n") + std::to_string(st.a);
        out.text += ',';
        out.text += (st.b_is_step ? "#" : "n") + std::to_string(st.b);
        out.text += ')';
    }
    return out;
}

inline std::string numbers_to_text(const std::vector<Rational>& numbers) {
    std::string text = "values";
    for (const auto& n : numbers) text += " " + format_rational(n) + " and";
    text += " done .";
    return text;
}

}  // namespace mwpdiv::testing
