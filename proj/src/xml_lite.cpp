#include "xml_lite.hpp"

#include <cctype>

#include "mwpdiv/types.hpp"

namespace mwpdiv::xml {

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Node parse_document() {
        skip_misc();
        Node root = parse_element();
        skip_misc();
        if (pos_ != s_.size()) fail("trailing content after root element");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("xml: " + what + " at offset " + std::to_string(pos_));
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    bool starts(std::string_view t) const { return s_.substr(pos_).starts_with(t); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    void skip_misc() {
        for (;;) {
            skip_ws();
            if (starts("<?")) {
                auto end = s_.find("?>", pos_);
                if (end == std::string_view::npos) fail("unterminated declaration");
                pos_ = end + 2;
            } else if (starts("<!--")) {
                auto end = s_.find("-->", pos_);
                if (end == std::string_view::npos) fail("unterminated comment");
                pos_ = end + 3;
            } else if (starts("<!DOCTYPE")) {
                auto end = s_.find('>', pos_);
                if (end == std::string_view::npos) fail("unterminated DOCTYPE");
                pos_ = end + 1;
            } else {
                return;
            }
        }
    }

    std::string parse_name() {
        std::size_t start = pos_;
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
                c == ':' || c == '.') {
                ++pos_;
            } else {
                break;
            }
        }
        if (pos_ == start) fail("expected name");
        return std::string(s_.substr(start, pos_ - start));
    }

    std::string decode_entities(std::string_view raw) {
        std::string out;
        out.reserve(raw.size());
        std::size_t i = 0;
        while (i < raw.size()) {
            if (raw[i] != '&') {
                out += raw[i++];
                continue;
            }
            auto semi = raw.find(';', i);
            if (semi == std::string_view::npos) fail("unterminated entity");
            std::string_view ent = raw.substr(i + 1, semi - i - 1);
            if (ent == "amp") out += '&';
            else if (ent == "lt") out += '<';
            else if (ent == "gt") out += '>';
            else if (ent == "quot") out += '"';
            else if (ent == "apos") out += '\'';
            else if (!ent.empty() && ent[0] == '#') {
                long code = 0;
                try {
                    code = ent[1] == 'x' || ent[1] == 'X'
                               ? std::stol(std::string(ent.substr(2)), nullptr, 16)
                               : std::stol(std::string(ent.substr(1)));
                } catch (const std::exception&) {
                    fail("bad numeric entity &" + std::string(ent) + ";");
                }
                append_utf8(out, code);
            } else {
                fail("unknown entity &" + std::string(ent) + ";");
            }
            i = semi + 1;
        }
        return out;
    }

    static void append_utf8(std::string& out, long code) {
        if (code < 0x80) {
            out += static_cast<char>(code);
        } else if (code < 0x800) {
            out += static_cast<char>(0xC0 | (code >> 6));
            out += static_cast<char>(0x80 | (code & 0x3F));
        } else if (code < 0x10000) {
            out += static_cast<char>(0xE0 | (code >> 12));
            out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (code & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (code >> 18));
            out += static_cast<char>(0x80 | ((code >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (code & 0x3F));
        }
    }

    Node parse_element() {
        if (peek() != '<') fail("expected element");
        ++pos_;
        Node node;
        node.name = parse_name();
        for (;;) {
            skip_ws();
            if (starts("/>")) {
                pos_ += 2;
                return node;
            }
            if (peek() == '>') {
                ++pos_;
                break;
            }
            std::string key = parse_name();
            skip_ws();
            if (peek() != '=') fail("expected '=' in attribute");
            ++pos_;
            skip_ws();
            char quote = peek();
            if (quote != '"' && quote != '\'') fail("expected quoted attribute value");
            ++pos_;
            auto end = s_.find(quote, pos_);
            if (end == std::string_view::npos) fail("unterminated attribute value");
            node.attrs[key] = decode_entities(s_.substr(pos_, end - pos_));
            pos_ = end + 1;
        }
        // content
        for (;;) {
            if (pos_ >= s_.size()) fail("unterminated element <" + node.name + ">");
            if (starts("</")) {
                pos_ += 2;
                std::string close = parse_name();
                if (close != node.name)
                    fail("mismatched close tag </" + close + "> for <" + node.name + ">");
                skip_ws();
                if (peek() != '>') fail("expected '>'");
                ++pos_;
                return node;
            }
            if (starts("<!--")) {
                auto end = s_.find("-->", pos_);
                if (end == std::string_view::npos) fail("unterminated comment");
                pos_ = end + 3;
                continue;
            }
            if (starts("<![CDATA[")) {
                auto end = s_.find("]]>", pos_);
                if (end == std::string_view::npos) fail("unterminated CDATA");
                node.text += s_.substr(pos_ + 9, end - pos_ - 9);
                pos_ = end + 3;
                continue;
            }
            if (peek() == '<') {
                node.children.push_back(parse_element());
                continue;
            }
            auto next = s_.find('<', pos_);
            if (next == std::string_view::npos) fail("unterminated element <" + node.name + ">");
            node.text += decode_entities(s_.substr(pos_, next - pos_));
            pos_ = next;
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

const Node* Node::child(std::string_view tag) const {
    for (const auto& c : children)
        if (c.name == tag) return &c;
    return nullptr;
}

const std::string* Node::attr(std::string_view key) const {
    auto it = attrs.find(std::string(key));
    return it == attrs.end() ? nullptr : &it->second;
}

Node parse(std::string_view content) { return Parser(content).parse_document(); }

}  // namespace mwpdiv::xml
