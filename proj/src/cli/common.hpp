#pragma once
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "bohm/cli.hpp"
#include "bohm/grid.hpp"
#include "bohm/nw.hpp"
#include "bohm/trajectory.hpp"
#include "json.hpp"

namespace bohm::cli {

using json = nlohmann::json;

struct Context {
  json config;  // after the quick merge
  Options opt;
  std::string hash;
  std::filesystem::path out;
  std::ostream* err;

  void warn(const std::string& msg) const { *err << "warning: " << msg << '\n'; }
};

// Field access with messages naming the offending key. `where` is the dotted
// path of j inside the config.
void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed);
const json& object_at(const json& j, const char* key, const std::string& where);
double number(const json& j, const char* key, const std::string& where);
double number_or(const json& j, const char* key, const std::string& where, double def);
std::size_t count(const json& j, const char* key, const std::string& where, std::size_t min);
std::size_t count_or(const json& j, const char* key, const std::string& where, std::size_t min, std::size_t def);
std::string text(const json& j, const char* key, const std::string& where);
std::vector<double> numbers(const json& j, const char* key, const std::string& where);
std::uint64_t seed(const json& j, const char* key, const std::string& where);

Grid2D parse_grid(const json& j, const std::string& where);
// {"min", "max", "n"} -> evenly spaced nodes
std::vector<double> parse_axis(const json& j, const std::string& where);
nw::PacketSpec parse_packet(const json& j, const std::string& where);

std::string format_number(double v);
// "a1", "a0p5": a tag usable in file names
std::string tag(double v);

json meta(const Context& c, const std::string& command);
void write_json(const Context& c, const std::string& name, const std::string& command, json body);

class CsvWriter {
 public:
  CsvWriter(const Context& c, const std::string& name, const std::string& command,
            std::initializer_list<const char*> header);
  void row(std::initializer_list<double> v);
  void close();  // writes the file

 private:
  std::string buf_;
  std::filesystem::path path_;
};

void write_trajectories(const Context& c, const std::string& name, const std::string& command,
                        const TrajectorySet& ts);
json census(const TrajectorySet& ts);

int cmd_modes(const Context& c);
int cmd_explode(const Context& c);
int cmd_nearnr(const Context& c);
int cmd_spin(const Context& c);

}  // namespace bohm::cli
