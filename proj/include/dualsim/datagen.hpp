#pragma once

// Deterministic generator for a university-domain benchmark graph
// (departments, professors, students, courses, publications) in N-Triples.
// Used by the scale tests and the bundled dualsim-gen tool. The RNG is
// self-contained so a (seed, target) pair always produces the same bytes.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace dualsim {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next()
    {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t upto(std::uint64_t n) { return n ? next() % n : 0; }
};

// Writes at least target_triples triples (whole universities only) and
// returns the exact count. Structure: a university has departments; a
// department has professors, courses, students and publications, wired so
// that advisor/memberOf/worksFor and takesCourse/teacherOf triangles close.
inline std::uint64_t generate_university_graph(std::ostream& out, std::uint64_t target_triples,
                                               std::uint64_t seed)
{
    SplitMix64 rng(seed);
    std::uint64_t emitted = 0;
    auto triple = [&](const std::string& s, const std::string& p, const std::string& o) {
        out << s << ' ' << p << ' ' << o << " .\n";
        ++emitted;
    };

    const std::string type = "<b:type>";
    const std::vector<std::string> topics = {
        "<b:topic0>", "<b:topic1>", "<b:topic2>", "<b:topic3>", "<b:topic4>",
        "<b:topic5>", "<b:topic6>", "<b:topic7>", "<b:topic8>", "<b:topic9>"};

    std::vector<std::string> universities;
    for (std::uint64_t u = 0; emitted < target_triples; ++u) {
        std::string univ = "<b:univ" + std::to_string(u) + ">";
        universities.push_back(univ);
        triple(univ, type, "<b:University>");

        std::uint64_t dept_count = 12 + rng.upto(8);
        for (std::uint64_t d = 0; d < dept_count; ++d) {
            std::string dept = "<b:u" + std::to_string(u) + "d" + std::to_string(d) + ">";
            std::string stem = dept.substr(1, dept.size() - 2);
            triple(dept, type, "<b:Department>");
            triple(dept, "<b:subOrganizationOf>", univ);

            std::vector<std::string> profs, courses, grads;
            std::uint64_t prof_count = 8 + rng.upto(6);
            for (std::uint64_t p = 0; p < prof_count; ++p) {
                std::string prof = "<" + stem + "p" + std::to_string(p) + ">";
                profs.push_back(prof);
                triple(prof, type, "<b:Professor>");
                triple(prof, "<b:worksFor>", dept);
                triple(prof, "<b:doctoralDegreeFrom>",
                       universities[rng.upto(universities.size())]);
                triple(prof, "<b:researchInterest>", topics[rng.upto(topics.size())]);
                for (int c = 0; c < 2; ++c) {
                    std::string course =
                        "<" + stem + "c" + std::to_string(courses.size()) + ">";
                    courses.push_back(course);
                    triple(course, type, "<b:Course>");
                    triple(prof, "<b:teacherOf>", course);
                }
            }

            std::uint64_t student_count = 50 + rng.upto(30);
            for (std::uint64_t s = 0; s < student_count; ++s) {
                std::string stud = "<" + stem + "s" + std::to_string(s) + ">";
                bool grad = rng.upto(4) == 0;
                triple(stud, type, grad ? "<b:GraduateStudent>" : "<b:Student>");
                triple(stud, "<b:memberOf>", dept);
                triple(stud, "<b:advisor>", profs[rng.upto(profs.size())]);
                triple(stud, "<b:undergraduateDegreeFrom>",
                       universities[rng.upto(universities.size())]);
                std::uint64_t takes = 1 + rng.upto(3);
                for (std::uint64_t k = 0; k < takes; ++k)
                    triple(stud, "<b:takesCourse>", courses[rng.upto(courses.size())]);
                if (grad) grads.push_back(stud);
            }

            std::uint64_t pub_count = prof_count * (2 + rng.upto(3));
            for (std::uint64_t q = 0; q < pub_count; ++q) {
                std::string pub = "<" + stem + "pub" + std::to_string(q) + ">";
                triple(pub, type, "<b:Publication>");
                triple(pub, "<b:publicationAuthor>", profs[rng.upto(profs.size())]);
                if (!grads.empty() && rng.upto(3) == 0)
                    triple(pub, "<b:publicationAuthor>", grads[rng.upto(grads.size())]);
            }
        }
    }
    return emitted;
}

} // namespace dualsim
