#include "bbohub/registry/cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include "bbohub/core/error.hpp"
#include "bbohub/core/serialize.hpp"
#include "bbohub/core/sha256.hpp"

namespace bbohub::registry {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path &p, const std::string &bytes) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io, "cannot write " + p.string());
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string unique_suffix() {
  std::random_device rd;
  std::ostringstream s;
  s << ::getpid() << '-' << std::hex << rd() << rd();
  return s.str();
}

int lock_file(const fs::path &path) {
  fs::create_directories(path.parent_path());
  const int fd = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(Errc::io, "cannot open lock " + path.string());
  while (::flock(fd, LOCK_EX) != 0) {
    if (errno != EINTR) {
      ::close(fd);
      throw Error(Errc::io, "cannot lock " + path.string());
    }
  }
  return fd;
}

void unlock_file(int fd) {
  if (fd >= 0) {
    ::flock(fd, LOCK_UN);
    ::close(fd);
  }
}

class IndexLock {
 public:
  explicit IndexLock(const fs::path &root) : fd_(lock_file(root / "index.lock")) {}
  ~IndexLock() { unlock_file(fd_); }
  IndexLock(const IndexLock &) = delete;
  IndexLock &operator=(const IndexLock &) = delete;

 private:
  int fd_;
};

std::string entry_key(const PackageRef &ref, const std::string &version) { return ref.str() + "@" + version; }

json load_index(const fs::path &root) {
  const fs::path p = root / "index.json";
  if (!fs::exists(p)) return {{"entries", json::object()}, {"current", json::object()}};
  json j = json::parse(read_file(p), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(Errc::corruption, "cache index is unreadable: " + p.string());
  return j;
}

void save_index(const fs::path &root, const json &index) {
  const fs::path tmp = root / ("index.json.tmp-" + unique_suffix());
  write_file(tmp, index.dump(2) + "\n");
  fs::rename(tmp, root / "index.json");
}

CacheEntry entry_from_json(const fs::path &root, const json &j) {
  CacheEntry e;
  e.ref = parse_ref(j.at("ref").get<std::string>());
  e.version = j.at("version").get<std::string>();
  e.content_digest = j.at("content_digest").get<std::string>();
  e.fetched_at = j.at("fetched_at").get<std::string>();
  e.files = j.at("files").get<std::vector<std::string>>();
  e.directory = root / "objects" / e.content_digest;
  return e;
}

}  // namespace

std::string content_digest(const FileSet &files) {
  Sha256 h;
  for (const auto &[path, bytes] : files) {
    h.update(path);
    h.update(std::string_view("\0", 1));
    h.update(std::to_string(bytes.size()));
    h.update(std::string_view("\0", 1));
    h.update(bytes);
  }
  return h.hex_digest();
}

FileSet read_tree(const fs::path &dir) {
  FileSet files;
  if (!fs::is_directory(dir)) throw Error(Errc::not_found, "not a directory: " + dir.string());
  for (auto it = fs::recursive_directory_iterator(dir); it != fs::recursive_directory_iterator(); ++it) {
    const auto name = it->path().filename().string();
    if (name.starts_with('.') || name == "__pycache__") {
      if (it->is_directory()) it.disable_recursion_pending();
      continue;
    }
    if (!it->is_regular_file()) continue;
    files.emplace(fs::relative(it->path(), dir).generic_string(), read_file(it->path()));
  }
  return files;
}

Cache::Cache(fs::path root) : root_(std::move(root)) {}

Cache::RefLock::RefLock(const Cache &cache, const PackageRef &ref)
    : fd_(lock_file(cache.root() / "locks" / (to_string(ref.category) + "__" + ref.name + ".lock"))) {}

Cache::RefLock::~RefLock() { unlock_file(fd_); }

CacheEntry Cache::store(const PackageRef &ref, const std::string &version, const FileSet &files) {
  fs::create_directories(root_ / "objects");
  const std::string digest = content_digest(files);
  const fs::path target = root_ / "objects" / digest;

  bool intact = false;
  if (fs::exists(target)) {
    try {
      intact = content_digest(read_tree(target)) == digest;
    } catch (const Error &) {
      intact = false;
    }
  }
  if (!intact) {
    const fs::path staging = root_ / "tmp" / unique_suffix();
    for (const auto &[rel, bytes] : files) write_file(staging / rel, bytes);
    for (const auto &[rel, bytes] : files) {
      // Keep executables runnable after the copy.
      if (bytes.starts_with("#!")) {
        fs::permissions(staging / rel, fs::perms::owner_exec | fs::perms::group_exec | fs::perms::others_exec,
                        fs::perm_options::add);
      }
    }
    std::error_code ec;
    if (fs::exists(target)) {
      const fs::path stale = root_ / "tmp" / ("stale-" + unique_suffix());
      fs::rename(target, stale, ec);
      fs::remove_all(stale, ec);
    }
    fs::rename(staging, target, ec);
    if (ec) {
      // Lost a publication race to an identical object.
      fs::remove_all(staging, ec);
    }
  }

  CacheEntry e;
  e.ref = ref;
  e.version = version;
  e.content_digest = digest;
  e.fetched_at = utc_now();
  for (const auto &[rel, bytes] : files) e.files.push_back(rel);
  e.directory = target;

  IndexLock lock(root_);
  json index = load_index(root_);
  index["entries"][entry_key(ref, version)] = {{"ref", ref.str()},
                                              {"version", version},
                                              {"content_digest", digest},
                                              {"fetched_at", e.fetched_at},
                                              {"files", e.files}};
  index["current"][ref.str()] = version;
  save_index(root_, index);
  return e;
}

std::optional<CacheEntry> Cache::lookup(const PackageRef &ref, const std::optional<std::string> &version) const {
  if (!fs::exists(root_ / "index.json")) return std::nullopt;
  const json index = load_index(root_);
  std::string v;
  if (version) {
    v = *version;
  } else {
    const auto &current = index["current"];
    if (!current.contains(ref.str())) return std::nullopt;
    v = current[ref.str()].get<std::string>();
  }
  const auto &entries = index["entries"];
  if (!entries.contains(entry_key(ref, v))) return std::nullopt;
  return entry_from_json(root_, entries[entry_key(ref, v)]);
}

FileSet Cache::verify(const CacheEntry &entry) const {
  FileSet files;
  try {
    files = read_tree(entry.directory);
  } catch (const Error &) {
    throw Error(Errc::corruption, "cached object missing for " + entry.ref.str() + "@" + entry.version);
  }
  std::vector<std::string> names;
  for (const auto &[rel, bytes] : files) names.push_back(rel);
  if (names != entry.files || content_digest(files) != entry.content_digest) {
    throw Error(Errc::corruption, "cached content of " + entry.ref.str() + "@" + entry.version +
                                      " does not match digest " + entry.content_digest);
  }
  return files;
}

std::vector<CacheEntry> Cache::list() const {
  std::vector<CacheEntry> out;
  if (!fs::exists(root_ / "index.json")) return out;
  const json index = load_index(root_);
  for (const auto &[key, e] : index["entries"].items()) out.push_back(entry_from_json(root_, e));
  return out;
}

fs::path default_cache_dir() {
  if (const char *dir = std::getenv("BBOHUB_CACHE_DIR"); dir != nullptr && *dir != '\0') return dir;
  if (const char *xdg = std::getenv("XDG_CACHE_HOME"); xdg != nullptr && *xdg != '\0') {
    return fs::path(xdg) / "bbohub";
  }
  if (const char *home = std::getenv("HOME"); home != nullptr && *home != '\0') {
    return fs::path(home) / ".cache" / "bbohub";
  }
  return fs::temp_directory_path() / "bbohub-cache";
}

}  // namespace bbohub::registry
