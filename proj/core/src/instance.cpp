#include "sfc/instance.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace sfc {

Instance::Instance(Topology topology, VnfCatalog catalog, Workload workload)
    : topology_(std::move(topology)), catalog_(std::move(catalog)), workload_(std::move(workload)) {
  server_type_.assign(topology_.size(), 0);
  for (NodeIndex l : topology_.servers()) {
    auto s = catalog_.find_server_type(topology_.server_type(l));
    if (!s) {
      throw InputError("server \"" + topology_.id(l) + "\" has server type \"" + topology_.server_type(l) +
                       "\" missing from the catalog");
    }
    server_type_[l] = *s;
  }
}

Instance Instance::with_topology(Topology topology) const { return Instance(std::move(topology), catalog_, workload_); }

Instance Instance::with_workload(Workload workload) const { return Instance(topology_, catalog_, std::move(workload)); }

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
}

}  // namespace

Instance load_instance_dir(const std::string& directory) {
  const std::filesystem::path dir(directory);
  Topology topology = load_topology(read_file(dir / "topology.json"));
  VnfCatalog catalog = load_catalog(read_file(dir / "catalog.json"));
  Workload workload = load_workload(read_file(dir / "workload.json"), catalog);
  return Instance(std::move(topology), std::move(catalog), std::move(workload));
}

void write_instance_dir(const Instance& instance, const std::string& directory) {
  const std::filesystem::path dir(directory);
  std::filesystem::create_directories(dir);
  write_file(dir / "topology.json", dump_topology(instance.topology()));
  write_file(dir / "catalog.json", dump_catalog(instance.catalog()));
  write_file(dir / "workload.json", dump_workload(instance.workload(), instance.catalog()));
}

}  // namespace sfc
