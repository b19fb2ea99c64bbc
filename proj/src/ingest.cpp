#include "mwpdiv/ingest.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "xml_lite.hpp"

namespace mwpdiv {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_equations(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t semi = text.find(';', start);
        std::string part = trim(text.substr(start, semi == std::string_view::npos
                                                       ? std::string_view::npos
                                                       : semi - start));
        if (!part.empty()) out.push_back(std::move(part));
        if (semi == std::string_view::npos) break;
        start = semi + 1;
    }
    return out;
}

const std::unordered_set<std::string>& canonical_keys() {
    static const std::unordered_set<std::string> keys = {
        "id", "body", "question", "equations", "formula",
        "answer", "problem_type", "grade", "source",
    };
    return keys;
}

}  // namespace

CorpusFormat corpus_format_from_name(std::string_view name) {
    if (name == "canonical") return CorpusFormat::Canonical;
    if (name == "asdiv") return CorpusFormat::Asdiv;
    if (name == "mathqa") return CorpusFormat::Mathqa;
    throw InputError("unknown corpus format \"" + std::string(name) +
                     "\" (expected canonical, asdiv or mathqa)");
}

LoadedCorpus load_canonical(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);

    LoadedCorpus out;
    std::vector<ProblemRecord> records;
    std::unordered_map<std::string, std::size_t> first_line_of_id;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::string where = path + ": line " + std::to_string(lineno);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw InputError(where + ": " + e.what());
        }
        if (!j.is_object()) throw InputError(where + ": expected a JSON object");

        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!canonical_keys().count(it.key()))
                out.warnings.push_back(where + ": unknown key \"" + it.key() + "\" ignored");
        }

        ProblemRecord r;
        try {
            auto require_string = [&](const char* key) {
                if (!j.contains(key))
                    throw InputError(where + ": missing field " + key);
                if (!j[key].is_string())
                    throw InputError(where + ": field " + key + " must be a string");
                return j[key].get<std::string>();
            };
            r.id = require_string("id");
            r.body = require_string("body");
            if (j.contains("question")) r.question = j["question"].get<std::string>();
            if (j.contains("answer")) r.answer = j["answer"].get<std::string>();
            if (j.contains("formula")) r.formula = j["formula"].get<std::string>();
            if (j.contains("source")) r.source = j["source"].get<std::string>();
            if (j.contains("equations")) {
                if (!j["equations"].is_array())
                    throw InputError(where + ": field equations must be an array of strings");
                for (const auto& e : j["equations"]) r.equations.push_back(e.get<std::string>());
            }
            if (j.contains("problem_type") && !j["problem_type"].is_null())
                r.problem_type = ProblemType{j["problem_type"].get<std::string>()};
            if (j.contains("grade") && !j["grade"].is_null()) {
                if (!j["grade"].is_number_integer())
                    throw InputError(where + ": field grade must be an integer");
                int g = j["grade"].get<int>();
                if (g < 1 || g > 6)
                    throw InputError(where + ": grade " + std::to_string(g) + " outside 1..6");
                r.grade = g;
            }
        } catch (const json::exception& e) {
            throw InputError(where + ": " + e.what());
        }
        if (r.id.empty()) throw InputError(where + ": empty id");
        if (!r.equations.empty() && !r.formula.empty())
            throw InputError(where + ": both equations and formula present");

        auto [it, inserted] = first_line_of_id.emplace(r.id, lineno);
        if (!inserted)
            throw InputError(where + ": duplicate id \"" + r.id + "\" (first seen on line " +
                             std::to_string(it->second) + ")");
        records.push_back(std::move(r));
    }
    out.corpus = Corpus(path, std::move(records));
    return out;
}

std::string canonical_lines(const Corpus& corpus) {
    std::string out;
    for (const auto& r : corpus.problems()) {
        json j;
        j["id"] = r.id;
        j["body"] = r.body;
        j["question"] = r.question;
        j["equations"] = r.equations;
        if (!r.formula.empty()) j["formula"] = r.formula;
        j["answer"] = r.answer;
        if (r.problem_type) j["problem_type"] = r.problem_type->name;
        if (r.grade) j["grade"] = *r.grade;
        if (!r.source.empty()) j["source"] = r.source;
        out += j.dump();
        out += '\n';
    }
    return out;
}

void save_canonical(const Corpus& corpus, const std::string& path) {
    std::ofstream outf(path, std::ios::binary | std::ios::trunc);
    if (!outf) throw InputError("cannot write file: " + path);
    outf << canonical_lines(corpus);
    if (!outf) throw InputError("write failed: " + path);
}

namespace {

void collect_problems(const xml::Node& node, std::vector<const xml::Node*>& out) {
    if (node.name == "Problem") {
        out.push_back(&node);
        return;
    }
    for (const auto& c : node.children) collect_problems(c, out);
}

}  // namespace

LoadedCorpus load_asdiv(const std::string& path) {
    xml::Node root = xml::parse(read_file(path));
    std::vector<const xml::Node*> elements;
    collect_problems(root, elements);
    if (elements.empty())
        throw InputError(path + ": no <Problem> elements found (not an ASDiv file?)");

    LoadedCorpus out;
    std::vector<ProblemRecord> records;
    records.reserve(elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const xml::Node& e = *elements[i];
        const std::string where =
            path + ": <Problem> #" + std::to_string(i + 1);
        const std::string* id = e.attr("ID");
        if (!id || id->empty()) throw InputError(where + ": missing ID attribute");

        ProblemRecord r;
        r.id = *id;
        auto text_of = [&](const char* tag, bool required) -> std::string {
            const xml::Node* c = e.child(tag);
            if (!c) {
                if (required)
                    throw InputError(where + " (ID " + *id + "): missing <" +
                                     tag + "> element");
                return {};
            }
            return trim(c->text);
        };
        r.body = text_of("Body", true);
        r.question = text_of("Question", true);
        r.answer = text_of("Answer", true);
        std::string formula = text_of("Formula", false);
        if (!formula.empty()) r.equations = split_equations(formula);
        std::string type = text_of("Solution-Type", false);
        if (!type.empty()) r.problem_type = ProblemType{type};
        if (const std::string* g = e.attr("Grade")) {
            try {
                r.grade = std::stoi(*g);
            } catch (const std::exception&) {
                throw InputError(where + " (ID " + *id + "): bad Grade \"" + *g + "\"");
            }
            if (*r.grade < 1 || *r.grade > 6)
                throw InputError(where + " (ID " + *id + "): grade outside 1..6");
        }
        if (const std::string* s = e.attr("Source")) r.source = *s;
        records.push_back(std::move(r));
    }
    out.corpus = Corpus(path, std::move(records));
    return out;
}

namespace {

// "a ) 3327 , b ) 3237 , c ) 3337 , d ) 2337 , e ) none of these"
std::unordered_map<char, std::string> parse_options(const std::string& text) {
    std::unordered_map<char, std::string> out;
    std::vector<std::pair<char, std::size_t>> markers;  // letter, value start
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c < 'a' || c > 'e') continue;
        bool at_start = true;  // preceded by nothing or a non-alphanumeric
        if (i > 0 && std::isalnum(static_cast<unsigned char>(text[i - 1]))) at_start = false;
        if (!at_start) continue;
        std::size_t j = i + 1;
        while (j < text.size() && text[j] == ' ') ++j;
        if (j < text.size() && (text[j] == ')' || text[j] == '.')) {
            markers.emplace_back(c, j + 1);
            i = j;
        }
    }
    for (std::size_t m = 0; m < markers.size(); ++m) {
        std::size_t begin = markers[m].second;
        std::size_t end = text.size();
        if (m + 1 < markers.size()) {
            // back off over the " , " separator preceding the next marker
            end = markers[m + 1].second;
            while (end > begin && text[end - 1] != ',') --end;
            if (end > begin) --end;
        }
        std::string value = trim(text.substr(begin, end - begin));
        while (!value.empty() && (value.back() == ',')) value.pop_back();
        out[markers[m].first] = trim(value);
    }
    return out;
}

}  // namespace

LoadedCorpus load_mathqa(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    if (!doc.is_array())
        throw InputError(path + ": expected a top-level JSON array (not a MathQA file?)");

    LoadedCorpus out;
    std::vector<ProblemRecord> records;
    records.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& j = doc[i];
        const std::string where = path + ": element #" + std::to_string(i + 1);
        if (!j.is_object()) throw InputError(where + ": expected an object");
        if (!j.contains("Problem"))
            throw InputError(where + ": missing \"Problem\" field");

        ProblemRecord r;
        char buf[24];
        std::snprintf(buf, sizeof buf, "mathqa-%05zu", i + 1);
        r.id = buf;
        std::string options, correct;
        try {
            r.body = j["Problem"].get<std::string>();
            if (j.contains("linear_formula"))
                r.formula = trim(j["linear_formula"].get<std::string>());
            if (j.contains("category")) {
                std::string cat = j["category"].get<std::string>();
                if (!cat.empty()) r.problem_type = ProblemType{std::move(cat)};
            }
            if (j.contains("options")) options = j["options"].get<std::string>();
            if (j.contains("correct")) correct = trim(j["correct"].get<std::string>());
        } catch (const json::exception& e) {
            throw InputError(where + ": " + e.what());
        }
        r.source = "mathqa";
        auto opts = parse_options(options);
        if (correct.size() == 1 && opts.count(correct[0])) {
            r.answer = opts[correct[0]];
        } else {
            out.warnings.push_back(where + ": cannot resolve correct option \"" + correct +
                                   "\"; answer left empty");
        }
        records.push_back(std::move(r));
    }
    out.corpus = Corpus(path, std::move(records));
    return out;
}

LoadedCorpus load_corpus(const std::string& path, CorpusFormat format) {
    switch (format) {
        case CorpusFormat::Canonical: return load_canonical(path);
        case CorpusFormat::Asdiv: return load_asdiv(path);
        case CorpusFormat::Mathqa: return load_mathqa(path);
    }
    throw std::logic_error("unreachable corpus format");
}

}  // namespace mwpdiv
