#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "sigrec/toolbox.hpp"

namespace sigrec {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw WorkspaceError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void load_address_dir(const fs::path& dir, std::map<std::uint64_t, std::string>& index,
                      std::vector<IngestWarning>& warnings) {
  if (!fs::is_directory(dir)) return;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto addr = parse_address(f.stem().string());
    if (!addr) {
      warnings.push_back({IngestWarning::Kind::BadFileName, f.filename().string()});
      continue;
    }
    index[*addr] = read_file(f);
  }
}

}  // namespace

std::string_view to_string(IngestWarning::Kind kind) {
  switch (kind) {
    case IngestWarning::Kind::MalformedSymbolRow: return "malformed_symbol_row";
    case IngestWarning::Kind::DuplicateSymbol: return "duplicate_symbol";
    case IngestWarning::Kind::OrphanDisassembly: return "orphan_disassembly";
    case IngestWarning::Kind::OrphanDecompilation: return "orphan_decompilation";
    case IngestWarning::Kind::BadFileName: return "bad_file_name";
  }
  return "unknown";
}

std::optional<std::uint64_t> parse_address(std::string_view text) {
  if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
  if (text.empty() || text.size() > 16) return std::nullopt;
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, 16);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::string format_address(std::uint64_t address) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, address, 16);
  (void)ec;
  return "0x" + std::string(buf, ptr);
}

Workspace ingest_workspace(const fs::path& root) {
  Workspace ws;
  ws.root = root;
  const fs::path manifest_path = root / "manifest.json";
  if (!fs::is_regular_file(manifest_path)) throw MissingManifest(root);
  try {
    auto manifest = nlohmann::json::parse(read_file(manifest_path));
    ws.framework = manifest.value("framework", "");
    ws.os_build = manifest.value("os_build", "");
  } catch (const nlohmann::json::exception& e) {
    throw WorkspaceError("malformed manifest.json: " + std::string(e.what()));
  }

  const fs::path symbols_path = root / "symbols.json";
  if (fs::is_regular_file(symbols_path)) {
    nlohmann::json rows;
    try {
      rows = nlohmann::json::parse(read_file(symbols_path));
    } catch (const nlohmann::json::exception& e) {
      throw WorkspaceError("malformed symbols.json: " + std::string(e.what()));
    }
    if (!rows.is_array()) throw WorkspaceError("symbols.json must hold an array");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      std::optional<std::uint64_t> addr;
      if (row.is_object() && row.contains("symbol") && row["symbol"].is_string() &&
          row.contains("address") && row["address"].is_string())
        addr = parse_address(row["address"].get<std::string>());
      if (!addr) {
        ws.warnings.push_back({IngestWarning::Kind::MalformedSymbolRow, "row " + std::to_string(i)});
        continue;
      }
      std::string text = row["symbol"].get<std::string>();
      if (!ws.symtab.lookup(text).empty())
        ws.warnings.push_back({IngestWarning::Kind::DuplicateSymbol, text});
      ws.symtab.add(std::move(text), *addr);
    }
  }

  load_address_dir(root / "disas", ws.disas_index, ws.warnings);
  load_address_dir(root / "dec", ws.dec_index, ws.warnings);

  for (const auto& [addr, _] : ws.disas_index) {
    if (!ws.symtab.contains_address(addr)) {
      ws.orphans.insert(addr);
      ws.warnings.push_back({IngestWarning::Kind::OrphanDisassembly, format_address(addr)});
    }
  }
  for (const auto& [addr, _] : ws.dec_index) {
    if (!ws.symtab.contains_address(addr)) {
      ws.orphans.insert(addr);
      ws.warnings.push_back({IngestWarning::Kind::OrphanDecompilation, format_address(addr)});
    }
  }

  const fs::path header_dir = root / "headers";
  if (fs::is_directory(header_dir)) {
    for (const auto& entry : fs::directory_iterator(header_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".h")
        ws.headers[entry.path().filename().string()] = read_file(entry.path());
  }
  return ws;
}

}  // namespace sigrec
