#include "kong/net_formats.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace kong {

namespace {

struct Token {
    std::string_view text;
    std::size_t column; // 1-based
};

std::vector<Token> tokenize(std::string_view line)
{
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#')
            ++i;
        tokens.push_back({line.substr(start, i - start), start + 1});
    }
    return tokens;
}

bool valid_identifier(std::string_view id)
{
    if (id.empty() || id == "->") return false;
    for (char c : id)
        if (c == ':' || c == '*' || c == '#') return false;
    return true;
}

std::optional<TokenCount> parse_count(std::string_view text)
{
    if (text.empty()) return std::nullopt;
    TokenCount value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

class TextParser {
public:
    NetDocument run(std::string_view input)
    {
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= input.size()) {
            const std::size_t eol = input.find('\n', pos);
            const std::string_view line =
                input.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
            ++line_no;
            parse_line(line_no, tokenize(line));
            if (eol == std::string_view::npos) break;
            pos = eol + 1;
        }
        doc_.source_format = NetFormat::Textual;
        return std::move(doc_);
    }

private:
    void parse_line(std::size_t line_no, const std::vector<Token>& tokens)
    {
        if (tokens.empty()) return;
        if (tokens[0].text == "pl")
            parse_place(line_no, tokens);
        else if (tokens[0].text == "tr")
            parse_transition(line_no, tokens);
        else
            throw SyntaxError(line_no, tokens[0].column, "'pl' or 'tr'");
    }

    void parse_place(std::size_t line_no, const std::vector<Token>& tokens)
    {
        if (tokens.size() < 2) throw SyntaxError(line_no, tokens[0].column + 2, "place identifier");
        if (!valid_identifier(tokens[1].text))
            throw SyntaxError(line_no, tokens[1].column, "place identifier");
        TokenCount initial = 0;
        if (tokens.size() >= 3) {
            auto k = parse_count(tokens[2].text);
            if (!k) throw SyntaxError(line_no, tokens[2].column, "initial token count");
            initial = *k;
        }
        if (tokens.size() > 3) throw SyntaxError(line_no, tokens[3].column, "end of line");
        try {
            doc_.net.add_place(std::string(tokens[1].text));
        } catch (const Error& e) {
            throw Error(ErrorCode::DuplicateId, "line " + std::to_string(line_no) + ": " + e.what());
        }
        doc_.initial.tokens.push_back(initial);
    }

    void parse_transition(std::size_t line_no, const std::vector<Token>& tokens)
    {
        if (tokens.size() < 2 || !valid_identifier(tokens[1].text))
            throw SyntaxError(line_no, tokens.size() < 2 ? tokens[0].column + 2 : tokens[1].column,
                              "transition identifier");
        if (tokens.size() < 3 || tokens[2].text != ":")
            throw SyntaxError(line_no, tokens.size() < 3 ? tokens[1].column + tokens[1].text.size() + 1
                                                         : tokens[2].column,
                              "':'");
        TransitionIndex t;
        try {
            t = doc_.net.add_transition(std::string(tokens[1].text));
        } catch (const Error& e) {
            throw Error(ErrorCode::DuplicateId, "line " + std::to_string(line_no) + ": " + e.what());
        }
        bool outputs = false;
        for (std::size_t i = 3; i < tokens.size(); ++i) {
            if (tokens[i].text == "->") {
                if (outputs) throw SyntaxError(line_no, tokens[i].column, "place or end of line");
                outputs = true;
                continue;
            }
            auto [place, weight] = parse_item(line_no, tokens[i]);
            if (outputs)
                doc_.net.add_output(t, place, weight);
            else
                doc_.net.add_input(t, place, weight);
        }
        if (!outputs) {
            const Token& last = tokens.back();
            throw SyntaxError(line_no, last.column + last.text.size() + 1, "'->'");
        }
    }

    std::pair<PlaceIndex, TokenCount> parse_item(std::size_t line_no, const Token& token)
    {
        std::string_view id = token.text;
        TokenCount weight = 1;
        if (const auto star = id.find('*'); star != std::string_view::npos) {
            auto w = parse_count(id.substr(star + 1));
            if (!w || *w == 0) throw SyntaxError(line_no, token.column + star + 1, "positive arc weight");
            weight = *w;
            id = id.substr(0, star);
        }
        if (!valid_identifier(id)) throw SyntaxError(line_no, token.column, "place identifier");
        auto place = doc_.net.find_place(id);
        if (!place)
            throw Error(ErrorCode::UnknownPlace, "line " + std::to_string(line_no) + ", column " +
                                                     std::to_string(token.column) +
                                                     ": unknown place '" + std::string(id) + "'");
        return {*place, weight};
    }

    NetDocument doc_;
};

void write_arcs(std::ostringstream& out, const PetriNet& net, std::span<const Arc> arcs)
{
    for (const Arc& a : arcs) {
        out << ' ' << net.place_name(a.place);
        if (a.weight != 1) out << '*' << a.weight;
    }
}

} // namespace

bool same_structure(const NetDocument& a, const NetDocument& b)
{
    return a.net == b.net && a.initial == b.initial;
}

NetDocument parse_net_text(std::string_view input) { return TextParser{}.run(input); }

std::string write_net_text(const NetDocument& doc)
{
    std::ostringstream out;
    if (doc.name) out << "# " << *doc.name << '\n';
    const PetriNet& net = doc.net;
    for (PlaceIndex p = 0; p < net.place_count(); ++p) {
        out << "pl " << net.place_name(p);
        if (doc.initial[p] != 0) out << ' ' << doc.initial[p];
        out << '\n';
    }
    for (TransitionIndex t = 0; t < net.transition_count(); ++t) {
        out << "tr " << net.transition_name(t) << " :";
        write_arcs(out, net, net.pre(t));
        out << " ->";
        write_arcs(out, net, net.post(t));
        out << '\n';
    }
    return out.str();
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorCode::Io, "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot rename into '" + path.string() + "': " + ec.message());
}

NetDocument load_net_file(const std::filesystem::path& path)
{
    const std::string content = read_text_file(path);
    const auto first = content.find_first_not_of(" \t\r\n");
    NetDocument doc = (first != std::string::npos && content[first] == '<') ? parse_pnml(content)
                                                                            : parse_net_text(content);
    if (!doc.name) doc.name = path.stem().string();
    return doc;
}

} // namespace kong
