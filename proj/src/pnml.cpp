#include "kong/net_formats.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <charconv>
#include <sstream>

namespace kong {

namespace {

namespace pt = boost::property_tree;

constexpr std::string_view kAttr = "<xmlattr>";

std::optional<std::string> attribute(const pt::ptree& node, const std::string& name)
{
    if (auto attrs = node.get_child_optional(std::string(kAttr)))
        if (auto v = attrs->get_optional<std::string>(name)) return *v;
    return std::nullopt;
}

std::string element_label(std::string_view tag, const pt::ptree& node)
{
    std::string label(tag);
    if (auto id = attribute(node, "id")) label += " '" + *id + "'";
    return label;
}

[[noreturn]] void unsupported(std::string_view tag, const pt::ptree& node, const std::string& why)
{
    throw Error(ErrorCode::Unsupported, "unsupported PNML feature in " + element_label(tag, node) + ": " + why);
}

[[noreturn]] void malformed(const std::string& why)
{
    throw Error(ErrorCode::Malformed, "malformed PNML: " + why);
}

bool ignorable(std::string_view tag)
{
    return tag == kAttr || tag == "<xmlcomment>" || tag == "name" || tag == "graphics" ||
           tag == "toolspecific";
}

TokenCount read_count(const pt::ptree& holder, std::string_view what, const std::string& owner)
{
    std::string text = holder.get<std::string>("text", holder.data());
    const auto b = text.find_first_not_of(" \t\r\n");
    const auto e = text.find_last_not_of(" \t\r\n");
    text = (b == std::string::npos) ? std::string() : text.substr(b, e - b + 1);
    TokenCount value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        malformed("bad " + std::string(what) + " '" + text + "' in " + owner);
    return value;
}

struct PendingArc {
    std::string id;
    std::string source;
    std::string target;
    TokenCount weight;
};

class PnmlReader {
public:
    NetDocument run(std::string_view input)
    {
        pt::ptree tree;
        try {
            std::istringstream in{std::string(input)};
            pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
        } catch (const pt::xml_parser_error& e) {
            malformed(e.what());
        }
        auto root = tree.get_child_optional("pnml");
        if (!root) malformed("missing <pnml> root element");

        const pt::ptree* net = nullptr;
        for (const auto& [tag, child] : *root) {
            if (tag == "net") {
                if (net) unsupported("net", child, "multiple nets in one document");
                net = &child;
            } else if (!ignorable(tag)) {
                unsupported(tag, child, "unexpected element under <pnml>");
            }
        }
        if (!net) malformed("missing <net> element");
        read_net(*net);
        resolve_arcs();
        doc_.source_format = NetFormat::Pnml;
        return std::move(doc_);
    }

private:
    void read_net(const pt::ptree& net)
    {
        if (auto type = attribute(net, "type")) {
            if (type->find("symmetricnet") != std::string::npos ||
                type->find("highlevelnet") != std::string::npos ||
                type->find("pt-hlpng") != std::string::npos)
                unsupported("net", net, "colored net type " + *type);
        }
        if (auto label = net.get_optional<std::string>("name.text")) doc_.name = *label;

        const pt::ptree* page = nullptr;
        bool direct_content = false;
        for (const auto& [tag, child] : net) {
            if (tag == "page") {
                if (page) unsupported("page", child, "multiple pages");
                page = &child;
            } else if (tag == "place" || tag == "transition" || tag == "arc") {
                direct_content = true;
            } else if (tag == "declaration") {
                unsupported(tag, child, "colored declarations");
            } else if (!ignorable(tag)) {
                unsupported(tag, child, "unexpected element under <net>");
            }
        }
        if (page && direct_content) unsupported("net", net, "objects outside the single page");
        read_objects(page ? *page : net, page != nullptr);
    }

    void read_objects(const pt::ptree& container, bool is_page)
    {
        for (const auto& [tag, child] : container) {
            if (tag == "place")
                read_place(child);
            else if (tag == "transition")
                read_transition(child);
            else if (tag == "arc")
                read_arc(child);
            else if (tag == "page")
                unsupported(tag, child, "nested pages");
            else if (tag == "referencePlace" || tag == "referenceTransition")
                unsupported(tag, child, "reference nodes (modular PNML)");
            else if (is_page && !ignorable(tag))
                unsupported(tag, child, "unexpected element under <page>");
        }
    }

    static std::string require_id(std::string_view tag, const pt::ptree& node)
    {
        auto id = attribute(node, "id");
        if (!id || id->empty()) malformed("<" + std::string(tag) + "> without id");
        return *id;
    }

    void read_place(const pt::ptree& node)
    {
        const std::string id = require_id("place", node);
        TokenCount initial = 0;
        for (const auto& [tag, child] : node) {
            if (tag == "initialMarking")
                initial = read_count(child, "initial marking", "place '" + id + "'");
            else if (tag == "hlinitialMarking" || tag == "type")
                unsupported("place", node, "colored place (" + tag + ")");
            else if (!ignorable(tag))
                unsupported("place", node, "unexpected element <" + tag + ">");
        }
        try {
            doc_.net.add_place(id);
        } catch (const Error& e) {
            throw Error(ErrorCode::DuplicateId, std::string("PNML: ") + e.what());
        }
        doc_.initial.tokens.push_back(initial);
    }

    void read_transition(const pt::ptree& node)
    {
        const std::string id = require_id("transition", node);
        for (const auto& [tag, child] : node)
            if (!ignorable(tag)) unsupported("transition", node, "unexpected element <" + tag + ">");
        try {
            doc_.net.add_transition(id);
        } catch (const Error& e) {
            throw Error(ErrorCode::DuplicateId, std::string("PNML: ") + e.what());
        }
    }

    void read_arc(const pt::ptree& node)
    {
        PendingArc arc;
        arc.id = require_id("arc", node);
        auto source = attribute(node, "source");
        auto target = attribute(node, "target");
        if (!source || !target) malformed("arc '" + arc.id + "' lacks source or target");
        arc.source = *source;
        arc.target = *target;
        arc.weight = 1;
        if (auto type = attribute(node, "type"); type && *type != "normal")
            unsupported("arc", node, *type + " arc");
        for (const auto& [tag, child] : node) {
            if (tag == "inscription") {
                arc.weight = read_count(child, "inscription", "arc '" + arc.id + "'");
            } else if (tag == "type") {
                const auto value = attribute(child, "value").value_or(child.data());
                if (value != "normal") unsupported("arc", node, value + " arc");
            } else if (tag == "hlinscription") {
                unsupported("arc", node, "colored inscription");
            } else if (!ignorable(tag)) {
                unsupported("arc", node, "unexpected element <" + tag + ">");
            }
        }
        if (arc.weight == 0) malformed("arc '" + arc.id + "' has weight 0");
        arcs_.push_back(std::move(arc));
    }

    void resolve_arcs()
    {
        const PetriNet& net = doc_.net;
        for (const PendingArc& arc : arcs_) {
            auto sp = net.find_place(arc.source);
            auto st = net.find_transition(arc.source);
            auto tp = net.find_place(arc.target);
            auto tt = net.find_transition(arc.target);
            if (sp && tt)
                doc_.net.add_input(*tt, *sp, arc.weight);
            else if (st && tp)
                doc_.net.add_output(*st, *tp, arc.weight);
            else if ((!sp && !st) || (!tp && !tt))
                malformed("arc '" + arc.id + "' references an unknown node");
            else
                malformed("arc '" + arc.id + "' must connect a place and a transition");
        }
    }

    NetDocument doc_;
    std::vector<PendingArc> arcs_;
};

std::string escape(std::string_view text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

NetDocument parse_pnml(std::string_view input) { return PnmlReader{}.run(input); }

std::string write_pnml(const NetDocument& doc)
{
    const PetriNet& net = doc.net;
    const std::string label = escape(doc.name.value_or("net"));
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<pnml xmlns=\"http://www.pnml.org/version-2009/grammar/pnml\">\n"
        << "  <net id=\"" << label << "\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">\n"
        << "    <name><text>" << label << "</text></name>\n"
        << "    <page id=\"page0\">\n";
    for (PlaceIndex p = 0; p < net.place_count(); ++p) {
        out << "      <place id=\"" << escape(net.place_name(p)) << "\">";
        if (doc.initial[p] != 0)
            out << "<initialMarking><text>" << doc.initial[p] << "</text></initialMarking>";
        out << "</place>\n";
    }
    for (TransitionIndex t = 0; t < net.transition_count(); ++t)
        out << "      <transition id=\"" << escape(net.transition_name(t)) << "\"/>\n";
    std::size_t arc_id = 0;
    auto fresh_arc_id = [&] {
        std::string id;
        do {
            id = "arc" + std::to_string(arc_id++);
        } while (net.find_place(id) || net.find_transition(id));
        return id;
    };
    auto write_arc = [&](const std::string& source, const std::string& target, TokenCount weight) {
        out << "      <arc id=\"" << fresh_arc_id() << "\" source=\"" << escape(source) << "\" target=\""
            << escape(target) << "\">";
        if (weight != 1) out << "<inscription><text>" << weight << "</text></inscription>";
        out << "</arc>\n";
    };
    for (TransitionIndex t = 0; t < net.transition_count(); ++t) {
        for (const Arc& a : net.pre(t))
            write_arc(net.place_name(a.place), net.transition_name(t), a.weight);
        for (const Arc& a : net.post(t))
            write_arc(net.transition_name(t), net.place_name(a.place), a.weight);
    }
    out << "    </page>\n  </net>\n</pnml>\n";
    return out.str();
}

} // namespace kong
