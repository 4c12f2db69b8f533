#pragma once

#include "kong/petri_net.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace kong {

enum class NetFormat { Pnml, Textual };

struct NetDocument {
    PetriNet net;
    Marking initial;
    std::optional<std::string> name;
    NetFormat source_format = NetFormat::Textual;
};

/// Same net (place order included) and same initial marking; the label and
/// the source format are ignored.
bool same_structure(const NetDocument& a, const NetDocument& b);

/// Line-oriented fixture format:
///
///     pl <id> [<initial>]
///     tr <id> : <place>[*<weight>] ... -> <place>[*<weight>] ...
///
/// `#` starts a comment, blank lines are skipped. Tokens are separated by
/// whitespace.
NetDocument parse_net_text(std::string_view input);
std::string write_net_text(const NetDocument& doc);

/// Single-page P/T PNML. Inhibitor/read/reset arcs, multiple pages or nets,
/// and high-level (colored) constructs raise Unsupported.
NetDocument parse_pnml(std::string_view input);
std::string write_pnml(const NetDocument& doc);

/// Reads a net file, choosing PNML when the first non-blank byte is '<'.
NetDocument load_net_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

/// Writes through a temporary sibling file and renames it into place.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view content);

} // namespace kong
