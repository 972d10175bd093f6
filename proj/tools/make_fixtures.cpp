#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "lattheta/fixtures.hpp"
#include "lattheta/json_io.hpp"

using namespace lattheta;

namespace {

void write_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open file for writing: " + path.string());
    out << dump_json(j);
    std::cout << path.string() << "\n";
}

std::string binary_tag(const BinaryForm& q) {
    return "q" + decimal(q.a) + decimal(q.b) + decimal(q.c);
}

} // namespace

int main(int argc, char** argv) {
    std::filesystem::path out_dir = argc > 1 ? argv[1] : "data";
    std::filesystem::create_directories(out_dir);

    write_file(out_dir / "e8.json", lattice_json(fixture_e8()));
    write_file(out_dir / "f5.json", lattice_json(fixture_f5()));
    write_file(out_dir / "leech.json", lattice_json(fixture_leech()));

    for (const auto& [form, level] : fixture_binary_forms()) {
        std::string tag = binary_tag(form);
        write_file(out_dir / (tag + ".json"), lattice_json(binary_to_lattice(form, tag)));
        (void)level;
    }
    return 0;
}
