// Writes a deterministic university-domain benchmark graph in N-Triples.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <dualsim/datagen.hpp>

int main(int argc, char** argv)
{
    CLI::App app{"generate a university-domain benchmark graph (N-Triples)"};
    std::string out_path;
    std::uint64_t triples = 1'000'000;
    std::uint64_t seed = 1;
    app.add_option("--out", out_path, "output file")->required();
    app.add_option("--triples", triples, "minimum triple count (default 1000000)");
    app.add_option("--seed", seed, "RNG seed (default 1)");
    CLI11_PARSE(app, argc, argv);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return 1;
    }
    std::uint64_t emitted = dualsim::generate_university_graph(out, triples, seed);
    std::cout << "wrote " << emitted << " triples to " << out_path << "\n";
    return 0;
}
