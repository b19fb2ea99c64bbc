#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mwpdiv::xml {

/// Element tree for the small, well-formed XML subset the corpus adapters
/// need: declaration, comments, CDATA, attributes, character entities.
/// Mixed content is concatenated into `text`.
struct Node {
    std::string name;
    std::map<std::string, std::string> attrs;
    std::vector<Node> children;
    std::string text;

    const Node* child(std::string_view tag) const;
    const std::string* attr(std::string_view key) const;
};

/// Parses a full document and returns the root element. Throws
/// mwpdiv::InputError with a byte offset on malformed input.
Node parse(std::string_view content);

}  // namespace mwpdiv::xml
