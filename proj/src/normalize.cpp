#include "mwpdiv/normalize.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace mwpdiv {

namespace detail {
extern const std::string_view kStopwordsText;  // generated from data/stopwords.txt
extern const std::string_view kNamesText;      // generated from data/names.txt
}

namespace {

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ascii_alnum(char c) { return is_ascii_alpha(c) || is_ascii_digit(c); }

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Common UTF-8 punctuation folded to ASCII so the scanner stays byte-based.
const std::vector<std::pair<std::string_view, std::string_view>>& utf8_folds() {
    static const std::vector<std::pair<std::string_view, std::string_view>> folds = {
        {"’", "'"}, {"‘", "'"}, {"“", "\""}, {"”", "\""},
        {"–", "--"}, {"—", "--"}, {"−", "-"}, {"×", "*"},
        {"÷", "/"}, {" ", " "},
    };
    return folds;
}

std::string fold_punctuation(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        bool matched = false;
        if (static_cast<unsigned char>(text[i]) >= 0x80) {
            for (const auto& [from, to] : utf8_folds()) {
                if (text.substr(i).starts_with(from)) {
                    out += to;
                    i += from.size();
                    matched = true;
                    break;
                }
            }
        }
        if (!matched) {
            out += text[i];
            ++i;
        }
    }
    return out;
}

std::unordered_set<std::string> parse_word_list(std::string_view text) {
    std::unordered_set<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
        if (!line.empty() && line.front() != '#') out.emplace(line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return out;
}

const std::unordered_set<std::string>& stopword_set() {
    static const auto set = parse_word_list(detail::kStopwordsText);
    return set;
}

const std::unordered_set<std::string>& gazetteer_set() {
    static const auto set = parse_word_list(detail::kNamesText);
    return set;
}

// Abbreviations kept with their trailing period.
const std::unordered_set<std::string>& abbreviations() {
    static const std::unordered_set<std::string> set = {
        "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "St.", "Mt.", "No.", "vs.",
        "etc.", "e.g.", "i.e.", "a.m.", "p.m.", "Jr.", "Sr.", "Inc.", "Co.",
    };
    return set;
}

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

// [NUMk] / [NAMEk], k >= 1.
std::size_t meta_symbol_length(std::string_view s) {
    if (s.empty() || s[0] != '[') return 0;
    std::size_t i = 1;
    if (s.substr(i).starts_with("NUM")) i += 3;
    else if (s.substr(i).starts_with("NAME")) i += 4;
    else return 0;
    std::size_t digits = 0;
    while (i < s.size() && is_ascii_digit(s[i])) { ++i; ++digits; }
    if (digits == 0 || i >= s.size() || s[i] != ']') return 0;
    return i + 1;
}

// digits, optional ",ddd" groups, optional ".digits", optional "/digits[.digits]".
std::size_t numeric_length(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size() && is_ascii_digit(s[i])) ++i;
    if (i == 0) return 0;
    while (i + 3 < s.size() && s[i] == ',' && is_ascii_digit(s[i + 1]) &&
           is_ascii_digit(s[i + 2]) && is_ascii_digit(s[i + 3]) &&
           (i + 4 >= s.size() || !is_ascii_digit(s[i + 4]))) {
        i += 4;
    }
    if (i + 1 < s.size() && s[i] == '.' && is_ascii_digit(s[i + 1])) {
        i += 2;
        while (i < s.size() && is_ascii_digit(s[i])) ++i;
    }
    if (i + 1 < s.size() && s[i] == '/' && is_ascii_digit(s[i + 1])) {
        std::size_t j = i + 2;
        while (j < s.size() && is_ascii_digit(s[j])) ++j;
        if (j + 1 < s.size() && s[j] == '.' && is_ascii_digit(s[j + 1])) {
            j += 2;
            while (j < s.size() && is_ascii_digit(s[j])) ++j;
        }
        i = j;
    }
    return i;
}

// Splits PTB-style contraction suffixes off a word token.
void emit_word(std::string word, std::vector<std::string>& out) {
    std::string lower = to_lower(word);
    if (lower == "cannot") {
        out.push_back(word.substr(0, 3));
        out.push_back(word.substr(3));
        return;
    }
    static const std::vector<std::string> clitics = {"n't", "'ll", "'re", "'ve", "'s", "'m", "'d"};
    for (const auto& c : clitics) {
        if (lower.size() > c.size() && ends_with(lower, c)) {
            out.push_back(word.substr(0, word.size() - c.size()));
            out.push_back(word.substr(word.size() - c.size()));
            return;
        }
    }
    if (word.size() > 1 && word.back() == '\'') {  // plural possessive: students'
        out.push_back(word.substr(0, word.size() - 1));
        out.push_back("'");
        return;
    }
    out.push_back(std::move(word));
}

}  // namespace

bool is_meta_symbol(std::string_view token) {
    return meta_symbol_length(token) == token.size() && !token.empty();
}

bool is_numeric_token(std::string_view token) {
    return !token.empty() && numeric_length(token) == token.size();
}

bool is_stopword(std::string_view lemma) {
    return stopword_set().count(std::string(lemma)) > 0;
}

bool in_name_gazetteer(std::string_view surface) {
    std::string key(surface);
    if (!key.empty() && key.back() == '.') key.pop_back();
    return gazetteer_set().count(key) > 0;
}

std::vector<std::string> tokenize(std::string_view raw) {
    const std::string text = fold_punctuation(raw);
    std::vector<std::string> out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::size_t m = meta_symbol_length(std::string_view(text).substr(i)); m > 0) {
            out.emplace_back(text.substr(i, m));
            i += m;
            continue;
        }
        if (is_ascii_digit(c)) {
            std::size_t m = numeric_length(std::string_view(text).substr(i));
            out.emplace_back(text.substr(i, m));
            i += m;
            continue;
        }
        if (is_ascii_alpha(c)) {
            std::size_t j = i;
            while (j < n) {
                if (is_ascii_alnum(text[j])) { ++j; continue; }
                // internal hyphen/slash/apostrophe between alphanumerics
                if ((text[j] == '-' || text[j] == '/' || text[j] == '\'') && j + 1 < n &&
                    is_ascii_alnum(text[j + 1]) && is_ascii_alnum(text[j - 1])) {
                    ++j;
                    continue;
                }
                break;
            }
            std::string word = text.substr(i, j - i);
            // trailing period kept on known abbreviations and single initials
            if (j < n && text[j] == '.') {
                std::string with_dot = word + ".";
                if (abbreviations().count(with_dot) > 0 ||
                    (word.size() == 1 && is_ascii_alpha(word[0]) && std::isupper(static_cast<unsigned char>(word[0])))) {
                    word = std::move(with_dot);
                    ++j;
                }
            }
            // trailing apostrophe (plural possessive)
            if (j < n && text[j] == '\'' && (j + 1 >= n || !is_ascii_alnum(text[j + 1]))) {
                word += '\'';
                ++j;
            }
            emit_word(std::move(word), out);
            i = j;
            continue;
        }
        // multi-char symbols
        if (c == '.' && i + 2 < n && text[i + 1] == '.' && text[i + 2] == '.') {
            out.emplace_back("...");
            i += 3;
            continue;
        }
        if (c == '-' && i + 1 < n && text[i + 1] == '-') {
            out.emplace_back("--");
            i += 2;
            continue;
        }
        out.emplace_back(1, c);
        ++i;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Baseline POS tagger: lexicon, then suffix heuristics, then fallbacks.
// ---------------------------------------------------------------------------

namespace {

const std::unordered_map<std::string, std::string>& tag_lexicon() {
    static const std::unordered_map<std::string, std::string> lex = [] {
        std::unordered_map<std::string, std::string> m;
        auto add = [&m](std::initializer_list<const char*> words, const char* tag) {
            for (const char* w : words) m.emplace(w, tag);
        };
        add({"a", "an", "the", "this", "that", "these", "those", "each", "every",
             "either", "neither", "both", "all", "another", "such", "some", "any", "no"},
            "DT");
        add({"i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them",
             "mine", "yours", "hers", "ours", "theirs", "myself", "yourself", "himself",
             "herself", "itself", "ourselves", "themselves", "someone", "anyone",
             "everyone", "something", "anything", "everything", "nothing"},
            "PRP");
        add({"my", "your", "his", "her", "its", "our", "their"}, "PRP$");
        add({"what", "who", "whom"}, "WP");
        add({"whose"}, "WP$");
        add({"which"}, "WDT");
        add({"when", "where", "why", "how"}, "WRB");
        add({"of", "in", "on", "at", "by", "for", "with", "about", "from", "into",
             "over", "under", "after", "before", "between", "during", "against",
             "through", "above", "below", "across", "around", "near", "behind",
             "beside", "along", "past", "until", "while", "because", "if", "than",
             "as", "upon", "within", "without", "among", "per", "off", "toward",
             "towards", "since", "besides", "out", "up", "down"},
            "IN");
        add({"and", "but", "or", "nor", "plus", "minus", "times"}, "CC");
        add({"to"}, "TO");
        add({"there"}, "EX");
        add({"will", "would", "shall", "should", "can", "could", "may", "might",
             "must", "ought"},
            "MD");
        add({"not", "now", "then", "here", "very", "too", "also", "just", "again",
             "once", "together", "only", "away", "back", "still", "yet", "so",
             "altogether", "apiece", "evenly", "equally"},
            "RB");
        add({"more", "less", "fewer"}, "JJR");
        add({"most", "least"}, "JJS");
        add({"many", "much", "few", "same", "other", "own", "several", "equal",
             "total", "whole", "entire", "extra", "remaining", "empty", "full"},
            "JJ");
        add({"zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
             "nine", "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
             "sixteen", "seventeen", "eighteen", "nineteen", "twenty", "thirty",
             "forty", "fifty", "sixty", "seventy", "eighty", "ninety", "hundred",
             "hundreds", "thousand", "thousands", "million", "millions", "billion"},
            "CD");
        add({"first", "second", "third", "fourth", "fifth", "sixth", "seventh",
             "eighth", "ninth", "tenth", "eleventh", "twelfth"},
            "JJ");
        add({"am", "are", "'re", "'m"}, "VBP");
        add({"is", "'s"}, "VBZ");  // "'s" overridden to POS below
        add({"was", "were"}, "VBD");
        add({"be"}, "VB");
        add({"been"}, "VBN");
        add({"being"}, "VBG");
        add({"have", "'ve", "do"}, "VBP");
        add({"has", "does"}, "VBZ");
        add({"had", "did"}, "VBD");
        add({"having", "doing"}, "VBG");
        add({"done"}, "VBN");
        // frequent verbs whose base/past forms no suffix rule can identify
        add({"go", "make", "take", "get", "give", "buy", "eat", "run", "read",
             "sell", "spend", "pay", "leave", "lose", "put", "cut", "let", "set",
             "keep", "hold", "bring", "think", "say", "see", "come", "know", "win",
             "feed", "meet", "send", "build", "fall", "grow", "draw", "drive",
             "ride", "write", "teach", "catch", "throw", "wear", "tell", "stand",
             "begin", "drink", "sing", "fly", "forget", "choose", "speak", "break",
             "become", "cost", "cross", "need", "want", "use", "share", "serve",
             "collect", "count", "weigh", "measure", "plant", "sleep", "swim",
             "find"},
            "VBP");
        add({"went", "made", "took", "got", "gave", "bought", "ate", "ran", "sold",
             "spent", "paid", "left", "lost", "kept", "held", "brought", "thought",
             "said", "saw", "came", "knew", "won", "fed", "met", "sent", "built",
             "fell", "grew", "drew", "drove", "rode", "wrote", "taught", "caught",
             "threw", "wore", "told", "stood", "began", "drank", "sang", "flew",
             "forgot", "chose", "spoke", "broke", "became", "slept", "swam",
             "found", "agreed", "freed"},
            "VBD");
        add({"gone", "taken", "given", "eaten", "known", "seen", "written",
             "thrown", "worn", "begun", "drunk", "sung", "flown", "forgotten",
             "chosen", "spoken", "broken", "grown", "drawn", "driven", "ridden",
             "fallen"},
            "VBN");
        m["n't"] = "RB";
        m["'s"] = "POS";
        m["'ll"] = "MD";
        m["'d"] = "MD";
        m["%"] = "NN";
        m["&"] = "CC";
        return m;
    }();
    return lex;
}

const std::unordered_set<std::string>& verb_stems() {
    // base forms used to disambiguate the -s suffix toward VBZ
    static const std::unordered_set<std::string> stems = {
        "go",    "make",  "take",  "get",   "give",  "buy",   "eat",    "run",
        "read",  "sell",  "spend", "pay",   "leave", "lose",  "put",    "cut",
        "let",   "keep",  "hold",  "bring", "think", "say",   "see",    "come",
        "know",  "win",   "feed",  "meet",  "send",  "build", "fall",   "grow",
        "draw",  "drive", "ride",  "write", "teach", "catch", "throw",  "wear",
        "tell",  "stand", "begin", "drink", "sing",  "fly",   "forget", "choose",
        "speak", "break", "become","cost",  "cross", "need",  "want",   "use",
        "share", "serve", "collect","count","weigh", "measure","plant", "sleep",
        "swim",  "pass",  "carry", "stay",  "play",  "walk",  "move",   "live",
        "work",  "help",  "ask",   "start", "finish","add",   "remain", "contain",
    };
    return stems;
}

std::string punct_tag(const std::string& t) {
    if (t == ".") return ".";
    if (t == "?" || t == "!") return ".";
    if (t == ",") return ",";
    if (t == ";" || t == ":" || t == "--" || t == "...") return ":";
    if (t == "(") return "-LRB-";
    if (t == ")") return "-RRB-";
    if (t == "\"" || t == "'") return "''";
    if (t == "`") return "``";
    if (t == "$") return "$";
    if (t == "#") return "#";
    return "SYM";  // + - * / = < > and friends
}

bool token_is_word(const std::string& t) {
    return !t.empty() && (is_ascii_alpha(t[0]) || (t[0] == '\'' && t.size() > 1));
}

bool sentence_boundary(const std::string& prev) {
    return prev == "." || prev == "?" || prev == "!";
}

std::string suffix_tag(const std::string& lower, const std::string& prev_tag) {
    const std::size_t n = lower.size();
    if (n > 4 && ends_with(lower, "ing")) return "VBG";
    // -eed words (speed, feed, seed) are mostly nouns or base verbs; the
    // few genuine pasts (agreed, freed) live in the lexicon
    if (n > 3 && ends_with(lower, "ed") && !ends_with(lower, "eed")) return "VBD";
    if (n > 3 && ends_with(lower, "ly")) return "RB";
    if (n > 4 && ends_with(lower, "est")) return "JJS";
    if (n > 4 && (ends_with(lower, "ous") || ends_with(lower, "ful") ||
                  ends_with(lower, "ive") || ends_with(lower, "able") ||
                  ends_with(lower, "ible") || ends_with(lower, "less")))
        return "JJ";
    if (n > 4 && (ends_with(lower, "tion") || ends_with(lower, "sion") ||
                  ends_with(lower, "ment") || ends_with(lower, "ness") ||
                  ends_with(lower, "ance") || ends_with(lower, "ence")))
        return "NN";
    if (n > 2 && lower.back() == 's' && !ends_with(lower, "ss") &&
        !ends_with(lower, "us") && !ends_with(lower, "is")) {
        // -s: VBZ when the stem is a known verb or the previous token looks
        // like a singular subject, else plural noun
        std::string stem = lower.substr(0, n - 1);
        if (ends_with(lower, "es")) {
            std::string es_stem = lower.substr(0, n - 2);
            if (verb_stems().count(es_stem)) return "VBZ";
        }
        if (verb_stems().count(stem)) return "VBZ";
        if (prev_tag == "NNP" || prev_tag == "PRP") return "VBZ";
        return "NNS";
    }
    return "NN";
}

}  // namespace

std::vector<std::string> pos_tag(const std::vector<std::string>& tokens) {
    std::vector<std::string> tags;
    tags.reserve(tokens.size());
    bool at_start = true;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& t = tokens[i];
        std::string tag;
        if (is_meta_symbol(t)) {
            tag = t.compare(0, 4, "[NUM") == 0 ? "CD" : "NNP";
        } else if (is_numeric_token(t)) {
            tag = "CD";
        } else if (!token_is_word(t)) {
            tag = punct_tag(t);
        } else {
            const std::string lower = to_lower(t);
            const auto& lex = tag_lexicon();
            const bool capitalized = std::isupper(static_cast<unsigned char>(t[0])) != 0;
            if (auto it = lex.find(lower); it != lex.end()) {
                tag = it->second;
                // capitalized lexicon word that is also a gazetteer name and not
                // sentence-initial reads as a proper noun ("Mark", "Bill")
                if (capitalized && !at_start && in_name_gazetteer(t)) tag = "NNP";
            } else if (capitalized && in_name_gazetteer(t)) {
                tag = "NNP";
            } else if (capitalized && !at_start) {
                tag = "NNP";
            } else {
                const std::string prev_tag = tags.empty() ? std::string() : tags.back();
                tag = suffix_tag(lower, prev_tag);
            }
        }
        tags.push_back(std::move(tag));
        at_start = sentence_boundary(t);
    }
    return tags;
}

// ---------------------------------------------------------------------------
// Lemmatizer: exception tables plus POS-keyed suffix rules.
// ---------------------------------------------------------------------------

namespace {

const std::unordered_map<std::string, std::string>& verb_exceptions() {
    static const std::unordered_map<std::string, std::string> m = {
        // be / have / do and clitics
        {"am", "be"}, {"is", "be"}, {"are", "be"}, {"was", "be"}, {"were", "be"},
        {"been", "be"}, {"being", "be"}, {"has", "have"}, {"had", "have"},
        {"having", "have"}, {"does", "do"}, {"did", "do"}, {"done", "do"},
        {"doing", "do"}, {"'m", "be"}, {"'re", "be"}, {"'ve", "have"},
        {"'ll", "will"}, {"'d", "would"},
        // irregular pasts and participles
        {"went", "go"}, {"gone", "go"}, {"goes", "go"}, {"going", "go"},
        {"made", "make"}, {"took", "take"}, {"taken", "take"},
        {"got", "get"}, {"gotten", "get"}, {"gave", "give"}, {"given", "give"},
        {"bought", "buy"}, {"ate", "eat"}, {"eaten", "eat"}, {"ran", "run"},
        {"sold", "sell"}, {"spent", "spend"}, {"paid", "pay"}, {"left", "leave"},
        {"lost", "lose"}, {"kept", "keep"}, {"held", "hold"},
        {"brought", "bring"}, {"thought", "think"}, {"said", "say"},
        {"saw", "see"}, {"seen", "see"}, {"came", "come"}, {"knew", "know"},
        {"known", "know"}, {"won", "win"}, {"fed", "feed"}, {"met", "meet"},
        {"sent", "send"}, {"built", "build"}, {"fell", "fall"},
        {"fallen", "fall"}, {"grew", "grow"}, {"grown", "grow"},
        {"drew", "draw"}, {"drawn", "draw"}, {"drove", "drive"},
        {"driven", "drive"}, {"rode", "ride"}, {"ridden", "ride"},
        {"wrote", "write"}, {"written", "write"}, {"taught", "teach"},
        {"caught", "catch"}, {"threw", "throw"}, {"thrown", "throw"},
        {"wore", "wear"}, {"worn", "wear"}, {"told", "tell"},
        {"stood", "stand"}, {"began", "begin"}, {"begun", "begin"},
        {"drank", "drink"}, {"drunk", "drink"}, {"sang", "sing"},
        {"sung", "sing"}, {"flew", "fly"}, {"flown", "fly"},
        {"forgot", "forget"}, {"forgotten", "forget"}, {"chose", "choose"},
        {"chosen", "choose"}, {"spoke", "speak"}, {"spoken", "speak"},
        {"broke", "break"}, {"broken", "break"}, {"became", "become"},
        {"slept", "sleep"}, {"swam", "swim"}, {"found", "find"},
        {"heard", "hear"}, {"read", "read"}, {"cost", "cost"}, {"cut", "cut"},
        {"put", "put"}, {"let", "let"}, {"hit", "hit"}, {"shut", "shut"},
        {"felt", "feel"}, {"meant", "mean"}, {"bit", "bite"}, {"hid", "hide"},
        {"led", "lead"}, {"sat", "sit"}, {"lay", "lie"}, {"laid", "lay"},
        {"rose", "rise"}, {"risen", "rise"}, {"shone", "shine"},
        {"swung", "swing"}, {"hung", "hang"}, {"dug", "dig"}, {"woke", "wake"},
        // regular verbs whose stems the suffix rules misjudge
        {"added", "add"}, {"adding", "add"}, {"adds", "add"},
        {"used", "use"}, {"using", "use"}, {"uses", "use"},
        {"opened", "open"}, {"opening", "open"}, {"opens", "open"},
        {"served", "serve"}, {"serving", "serve"}, {"serves", "serve"},
        {"solved", "solve"}, {"solving", "solve"}, {"solves", "solve"},
        {"moved", "move"}, {"moving", "move"}, {"moves", "move"},
        {"lived", "live"}, {"living", "live"}, {"lives", "live"},
        {"loved", "love"}, {"loving", "love"}, {"loves", "love"},
        {"divided", "divide"}, {"dividing", "divide"}, {"divides", "divide"},
        {"decided", "decide"}, {"deciding", "decide"}, {"decides", "decide"},
        {"received", "receive"}, {"receiving", "receive"}, {"receives", "receive"},
        {"arrived", "arrive"}, {"arriving", "arrive"}, {"arrives", "arrive"},
        {"compared", "compare"}, {"comparing", "compare"}, {"compares", "compare"},
        {"prepared", "prepare"}, {"preparing", "prepare"}, {"prepares", "prepare"},
        {"measured", "measure"}, {"measuring", "measure"}, {"measures", "measure"},
        {"answered", "answer"}, {"answering", "answer"}, {"answers", "answer"},
        {"happened", "happen"}, {"happening", "happen"}, {"happens", "happen"},
        {"listened", "listen"}, {"listening", "listen"}, {"listens", "listen"},
        {"gathered", "gather"}, {"gathering", "gather"}, {"gathers", "gather"},
        {"delivered", "deliver"}, {"delivering", "deliver"}, {"delivers", "deliver"},
        {"remembered", "remember"}, {"remembering", "remember"},
        {"offered", "offer"}, {"offering", "offer"}, {"offers", "offer"},
        {"covered", "cover"}, {"covering", "cover"}, {"covers", "cover"},
        {"ordered", "order"}, {"ordering", "order"}, {"orders", "order"},
        {"watered", "water"}, {"watering", "water"}, {"waters", "water"},
        {"seeing", "see"}, {"agreeing", "agree"}, {"freeing", "free"},
        {"dyeing", "dye"}, {"tying", "tie"}, {"dying", "die"}, {"lying", "lie"},
    };
    return m;
}

const std::unordered_map<std::string, std::string>& noun_exceptions() {
    static const std::unordered_map<std::string, std::string> m = {
        {"children", "child"}, {"men", "man"}, {"women", "woman"},
        {"feet", "foot"}, {"teeth", "tooth"}, {"geese", "goose"},
        {"mice", "mouse"}, {"oxen", "ox"}, {"people", "people"},
        {"leaves", "leaf"}, {"loaves", "loaf"}, {"halves", "half"},
        {"knives", "knife"}, {"wives", "wife"}, {"lives", "life"},
        {"shelves", "shelf"}, {"wolves", "wolf"}, {"calves", "calf"},
        {"thieves", "thief"}, {"scarves", "scarf"}, {"elves", "elf"},
        {"buses", "bus"}, {"gases", "gas"}, {"quizzes", "quiz"},
        {"shoes", "shoe"}, {"toes", "toe"}, {"dominoes", "domino"},
        {"pennies", "penny"}, {"candies", "candy"}, {"pastries", "pastry"},
        {"series", "series"}, {"species", "species"}, {"cookies", "cookie"},
        {"movies", "movie"}, {"dice", "die"}, {"geometries", "geometry"},
    };
    return m;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// consonant-vowel-consonant ending on a short stem wants its silent e back
// (bak -> bake); longer stems (visit) do not.
bool wants_final_e(const std::string& stem) {
    if (stem.size() < 3 || stem.size() > 4) return false;
    const std::size_t n = stem.size();
    char c1 = stem[n - 3], c2 = stem[n - 2], c3 = stem[n - 1];
    if (is_vowel(c1) || !is_vowel(c2) || is_vowel(c3)) return false;
    return c3 != 'w' && c3 != 'x' && c3 != 'y';
}

// planned -> plan, but call stays call
std::string undouble(std::string stem) {
    const std::size_t n = stem.size();
    if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) &&
        stem[n - 1] != 'l' && stem[n - 1] != 's' && stem[n - 1] != 'z') {
        stem.pop_back();
    }
    return stem;
}

std::string plural_noun_lemma(const std::string& t) {
    const std::size_t n = t.size();
    if (n > 4 && ends_with(t, "ies")) return t.substr(0, n - 3) + "y";
    if (n > 4 && (ends_with(t, "sses") || ends_with(t, "xes") || ends_with(t, "zes") ||
                  ends_with(t, "ches") || ends_with(t, "shes") || ends_with(t, "oes")))
        return t.substr(0, n - 2);
    if (n > 2 && t.back() == 's' && !ends_with(t, "ss") && !ends_with(t, "us") &&
        !ends_with(t, "is"))
        return t.substr(0, n - 1);
    return t;
}

std::string verb_lemma(const std::string& t, std::string_view pos) {
    const std::size_t n = t.size();
    if (pos == "VBZ") {
        if (n > 4 && ends_with(t, "ies")) return t.substr(0, n - 3) + "y";
        if (n > 4 && (ends_with(t, "sses") || ends_with(t, "xes") || ends_with(t, "zes") ||
                      ends_with(t, "ches") || ends_with(t, "shes") || ends_with(t, "oes")))
            return t.substr(0, n - 2);
        if (n > 2 && t.back() == 's' && !ends_with(t, "ss")) return t.substr(0, n - 1);
        return t;
    }
    if (pos == "VBG") {
        if (n > 4 && ends_with(t, "ing")) {
            std::string stem = t.substr(0, n - 3);
            std::string un = undouble(stem);
            if (un != stem) return un;
            if (wants_final_e(stem)) return stem + "e";
            return stem;
        }
        return t;
    }
    // VBD / VBN
    if (n > 4 && ends_with(t, "ied")) return t.substr(0, n - 3) + "y";
    if (n > 4 && ends_with(t, "eed")) return t.substr(0, n - 1);
    if (n > 3 && ends_with(t, "ed")) {
        std::string stem = t.substr(0, n - 2);
        std::string un = undouble(stem);
        if (un != stem) return un;
        if (wants_final_e(stem)) return stem + "e";
        return stem;
    }
    return t;
}

}  // namespace

std::string lemmatize(std::string_view token, std::string_view pos) {
    if (is_meta_symbol(token)) return std::string(token);
    std::string t = to_lower(token);
    bool has_alpha = std::any_of(t.begin(), t.end(), [](char c) { return is_ascii_alpha(c); });
    if (!has_alpha) return t;

    if (t == "n't") return "not";
    if (pos.starts_with("V") || pos == "MD") {
        if (auto it = verb_exceptions().find(t); it != verb_exceptions().end())
            return it->second;
        return verb_lemma(t, pos);
    }
    if (pos == "NNS" || pos == "NNPS") {
        if (auto it = noun_exceptions().find(t); it != noun_exceptions().end())
            return it->second;
        return plural_noun_lemma(t);
    }
    return t;
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

NormalizedProblem normalize_tokens(const std::string& id,
                                   const std::vector<std::string>& tokens,
                                   const std::vector<std::string>& pos,
                                   const std::vector<std::string>& lemmas) {
    if (tokens.size() != pos.size() || tokens.size() != lemmas.size())
        throw InputError("problem \"" + id + "\": tokens/pos/lemmas lengths differ");

    const std::size_t n = tokens.size();
    NormalizedProblem out;
    out.id = id;
    out.pos_tokens = pos;

    std::vector<std::string> piece(n);       // meta symbol, or empty = use lemma
    std::vector<bool> consumed(n, false);    // absorbed into a neighboring meta symbol

    // quantity substitution first, so CD tokens never join a name run
    std::map<std::string, int> num_index;
    std::map<std::string, int> name_index;
    for (std::size_t i = 0; i < n; ++i) {
        if (is_meta_symbol(tokens[i])) {
            piece[i] = tokens[i];  // already-normalized input passes through
            continue;
        }
        const bool quantity = pos[i] == "CD" || is_numeric_token(tokens[i]);
        if (!quantity) continue;
        if (i > 0 && tokens[i - 1] == "$" && piece[i - 1].empty() && !consumed[i - 1])
            consumed[i - 1] = true;  // "$ 0.75" collapses into one [NUMk]
        std::string key = to_lower(tokens[i]);
        auto [it, inserted] = num_index.emplace(key, static_cast<int>(num_index.size()) + 1);
        piece[i] = "[NUM" + std::to_string(it->second) + "]";
    }

    // person names: maximal NNP runs containing at least one gazetteer hit
    for (std::size_t i = 0; i < n;) {
        if (consumed[i] || !piece[i].empty() || !(pos[i] == "NNP" || pos[i] == "NNPS")) {
            ++i;
            continue;
        }
        std::size_t j = i;
        bool hit = false;
        while (j < n && !consumed[j] && piece[j].empty() &&
               (pos[j] == "NNP" || pos[j] == "NNPS")) {
            if (in_name_gazetteer(tokens[j])) hit = true;
            ++j;
        }
        if (hit) {
            std::string key;
            for (std::size_t k = i; k < j; ++k) {
                if (k > i) key += ' ';
                key += tokens[k];
            }
            auto [it, inserted] = name_index.emplace(key, static_cast<int>(name_index.size()) + 1);
            piece[i] = "[NAME" + std::to_string(it->second) + "]";
            for (std::size_t k = i + 1; k < j; ++k) consumed[k] = true;
        }
        i = j;
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (consumed[i]) continue;
        if (!piece[i].empty()) {
            out.norm_tokens.push_back(piece[i]);
            continue;
        }
        const std::string& lemma = lemmas[i];
        if (is_stopword(lemma)) continue;
        out.norm_tokens.push_back(lemma);
    }
    return out;
}

std::vector<TokenAnnotation> annotate(std::string_view text) {
    std::vector<std::string> tokens = tokenize(text);
    std::vector<std::string> tags = pos_tag(tokens);
    std::vector<TokenAnnotation> out;
    out.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        TokenAnnotation a;
        a.lemma = lemmatize(tokens[i], tags[i]);
        a.surface = std::move(tokens[i]);
        a.pos = std::move(tags[i]);
        out.push_back(std::move(a));
    }
    return out;
}

NormalizedProblem normalize_problem(const ProblemRecord& record,
                                    const AnnotationSidecar* sidecar) {
    if (sidecar != nullptr) {
        if (const auto* e = sidecar->find(record.id))
            return normalize_tokens(record.id, e->tokens, e->pos, e->lemmas);
    }
    const std::string text = record.analysis_text();
    if (text.empty())
        throw InputError("problem \"" + record.id + "\": empty text");
    const std::vector<TokenAnnotation> annotations = annotate(text);
    std::vector<std::string> tokens, tags, lemmas;
    tokens.reserve(annotations.size());
    tags.reserve(annotations.size());
    lemmas.reserve(annotations.size());
    for (const auto& a : annotations) {
        tokens.push_back(a.surface);
        tags.push_back(a.pos);
        lemmas.push_back(a.lemma);
    }
    return normalize_tokens(record.id, tokens, tags, lemmas);
}

// ---------------------------------------------------------------------------
// Sidecar
// ---------------------------------------------------------------------------

void AnnotationSidecar::add(const std::string& id, Entry entry) {
    if (entry.tokens.size() != entry.pos.size() || entry.tokens.size() != entry.lemmas.size())
        throw InputError("sidecar entry \"" + id + "\": arrays have different lengths");
    entries_[id] = std::move(entry);
}

const AnnotationSidecar::Entry* AnnotationSidecar::find(const std::string& id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
}

AnnotationSidecar AnnotationSidecar::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open sidecar file: " + path);
    AnnotationSidecar sc;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw InputError(path + ": line " + std::to_string(lineno) + ": " + e.what());
        }
        try {
            Entry e;
            std::string id = j.at("id").get<std::string>();
            e.tokens = j.at("tokens").get<std::vector<std::string>>();
            e.pos = j.at("pos").get<std::vector<std::string>>();
            e.lemmas = j.at("lemmas").get<std::vector<std::string>>();
            sc.add(id, std::move(e));
        } catch (const nlohmann::json::exception& e) {
            throw InputError(path + ": line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return sc;
}

}  // namespace mwpdiv
