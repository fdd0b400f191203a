#pragma once

#include <span>
#include <string_view>

namespace bislant::fixtures {

struct Fixture {
    std::string_view name;  // e.g. "ex6.1"
    std::string_view file;  // e.g. "ex61.lps"
    std::string_view text;  // full spec-file contents
    bool listed;            // shown by `examples list`
};

std::span<const Fixture> all();
const Fixture* find(std::string_view name);

}  // namespace bislant::fixtures
