#include <fstream>
#include <random>

#include "gamesys/design_io.hpp"
#include "gamesys/error.hpp"
#include "gamesys/service.hpp"

namespace gamesys::service {

using nlohmann::json;

json stored_design_to_json(const StoredDesign& stored) {
  return {{"id", stored.id},
          {"name", stored.name},
          {"revision", stored.revision},
          {"design", design_to_json(stored.design)}};
}

namespace {

void require_valid_design(const GameDesign& design) {
  const ValidationReport report = validate_design(design);
  if (!report.valid) {
    throw ServiceError(400, "VALIDATION_ERROR", "design failed validation",
                       validation_report_to_json(report));
  }
}

StoredDesign stored_from_json(const json& doc) {
  StoredDesign stored;
  stored.id = doc.at("id").get<std::string>();
  stored.name = doc.at("name").get<std::string>();
  stored.revision = doc.at("revision").get<int>();
  stored.design = design_from_json(doc.at("design"));
  return stored;
}

}  // namespace

DesignStore::DesignStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) {
    throw Error(ErrorCode::IoError,
                "IO_ERROR: cannot create data directory " + dir_.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.path().extension() != ".json") continue;
    try {
      StoredDesign stored =
          stored_from_json(json::parse(read_text_file(entry.path().string())));
      if (!validate_design(stored.design).valid) continue;
      designs_[stored.id] = std::move(stored);
    } catch (const std::exception&) {
      // Unreadable files are left in place and skipped.
    }
  }
}

std::filesystem::path DesignStore::path_of(const std::string& id) const {
  return dir_ / (id + ".json");
}

void DesignStore::persist(const StoredDesign& stored) const {
  const auto target = path_of(stored.id);
  const auto temp = target.string() + ".tmp";
  write_text_file(temp, stored_design_to_json(stored).dump(2) + "\n");
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) throw Error(ErrorCode::IoError, "IO_ERROR: cannot write " + target.string());
}

std::string DesignStore::fresh_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  while (true) {
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx",
                  static_cast<unsigned long long>(rng() ^ ++counter_));
    std::string id = std::string("d") + buffer;
    if (!designs_.count(id)) return id;
  }
}

StoredDesign DesignStore::create(const GameDesign& design) {
  require_valid_design(design);
  std::lock_guard lock(mutex_);
  StoredDesign stored{fresh_id(), design.name, 1, canonicalize(design)};
  persist(stored);
  designs_[stored.id] = stored;
  return stored;
}

std::optional<StoredDesign> DesignStore::get(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = designs_.find(id);
  if (it == designs_.end()) return std::nullopt;
  return it->second;
}

std::vector<StoredDesign> DesignStore::list() const {
  std::lock_guard lock(mutex_);
  std::vector<StoredDesign> out;
  for (const auto& [id, stored] : designs_) out.push_back(stored);
  return out;
}

StoredDesign DesignStore::update(const std::string& id, const GameDesign& design,
                                 std::optional<int> expectedRevision) {
  std::lock_guard lock(mutex_);
  const auto it = designs_.find(id);
  if (it == designs_.end()) {
    throw ServiceError(404, "NOT_FOUND", "no design '" + id + "'");
  }
  if (expectedRevision && *expectedRevision != it->second.revision) {
    throw ServiceError(409, "REVISION_CONFLICT",
                       "design '" + id + "' is at revision " +
                           std::to_string(it->second.revision),
                       json{{"currentRevision", it->second.revision}});
  }
  require_valid_design(design);
  StoredDesign stored{id, design.name, it->second.revision + 1,
                      canonicalize(design)};
  persist(stored);
  it->second = stored;
  return stored;
}

bool DesignStore::remove(const std::string& id) {
  std::lock_guard lock(mutex_);
  const auto it = designs_.find(id);
  if (it == designs_.end()) return false;
  std::error_code ec;
  std::filesystem::remove(path_of(id), ec);
  designs_.erase(it);
  return true;
}

}  // namespace gamesys::service
