#pragma once

// Closed oriented triangle meshes: built-in icosphere and torus generators,
// OFF/OBJ ingestion (triangles only), and validation used by the holonomy
// probe.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "biham/linalg3.hpp"

namespace biham {

struct TriangulatedSurface {
    std::vector<Point3> vertices;
    std::vector<std::array<int, 3>> triangles;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }

    long n_edges() const {
        std::map<std::pair<int, int>, int> edges;
        for (const auto& t : triangles)
            for (int e = 0; e < 3; ++e) {
                const int a = t[e], b = t[(e + 1) % 3];
                edges[{std::min(a, b), std::max(a, b)}]++;
            }
        return static_cast<long>(edges.size());
    }

    long euler_characteristic() const {
        return n_vertices() - n_edges() + n_triangles();
    }

    // Closed and consistently oriented: every directed edge appears exactly
    // once, and so does its reverse.
    void validate_closed() const {
        std::map<std::pair<int, int>, int> directed;
        for (const auto& t : triangles) {
            if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
                throw std::invalid_argument("mesh: degenerate triangle");
            for (int e = 0; e < 3; ++e) {
                const int a = t[e], b = t[(e + 1) % 3];
                if (a < 0 || b < 0 || a >= n_vertices() || b >= n_vertices())
                    throw std::invalid_argument("mesh: vertex index out of range");
                if (++directed[{a, b}] > 1)
                    throw std::invalid_argument("mesh: repeated directed edge (bad orientation)");
            }
        }
        for (const auto& [e, cnt] : directed) {
            (void)cnt;
            if (directed.find({e.second, e.first}) == directed.end())
                throw std::invalid_argument("mesh: boundary edge (mesh not closed)");
        }
    }

    double signed_volume() const {
        double vol = 0.0;
        for (const auto& t : triangles)
            vol += vertices[t[0]].dot(vertices[t[1]].cross(vertices[t[2]])) / 6.0;
        return vol;
    }
};

inline TriangulatedSurface icosphere(int subdivisions, double radius = 1.0,
                                     Point3 center = {}) {
    if (subdivisions < 0 || subdivisions > 8)
        throw std::invalid_argument("icosphere: subdivisions must be in [0, 8]");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    TriangulatedSurface m;
    m.vertices = {{-1, t, 0},  {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                  {0, -1, t},  {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                  {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    for (auto& v : m.vertices) v = v.normalized();
    m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                   {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                   {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                   {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (int lev = 0; lev < subdivisions; ++lev) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&m, &midpoint](int a, int b) {
            const auto key = std::make_pair(std::min(a, b), std::max(a, b));
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const int id = m.n_vertices();
            m.vertices.push_back(((m.vertices[a] + m.vertices[b]) * 0.5).normalized());
            midpoint[key] = id;
            return id;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(m.triangles.size() * 4);
        for (const auto& tr : m.triangles) {
            const int ab = mid(tr[0], tr[1]), bc = mid(tr[1], tr[2]), ca = mid(tr[2], tr[0]);
            next.push_back({tr[0], ab, ca});
            next.push_back({tr[1], bc, ab});
            next.push_back({tr[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        m.triangles = std::move(next);
    }
    if (m.signed_volume() < 0)
        for (auto& tr : m.triangles) std::swap(tr[1], tr[2]);
    for (auto& v : m.vertices) v = v * radius + center;
    return m;
}

// Torus around the z-axis, outer radius R, tube radius r.
inline TriangulatedSurface torus_mesh(double R, double r, int n_u, int n_v) {
    if (!(R > r && r > 0.0)) throw std::invalid_argument("torus_mesh: need R > r > 0");
    if (n_u < 3 || n_v < 3) throw std::invalid_argument("torus_mesh: need n_u, n_v >= 3");
    TriangulatedSurface m;
    m.vertices.reserve(static_cast<std::size_t>(n_u) * n_v);
    for (int i = 0; i < n_u; ++i) {
        const double u = 2.0 * M_PI * i / n_u;
        for (int j = 0; j < n_v; ++j) {
            const double v = 2.0 * M_PI * j / n_v;
            m.vertices.push_back({(R + r * std::cos(v)) * std::cos(u),
                                  (R + r * std::cos(v)) * std::sin(u), r * std::sin(v)});
        }
    }
    auto id = [n_v](int i, int j) { return i * n_v + j; };
    for (int i = 0; i < n_u; ++i) {
        const int i1 = (i + 1) % n_u;
        for (int j = 0; j < n_v; ++j) {
            const int j1 = (j + 1) % n_v;
            m.triangles.push_back({id(i, j), id(i1, j), id(i1, j1)});
            m.triangles.push_back({id(i, j), id(i1, j1), id(i, j1)});
        }
    }
    return m;
}

inline TriangulatedSurface read_off(std::istream& is) {
    std::string tok;
    if (!(is >> tok) || tok != "OFF") throw std::invalid_argument("OFF: missing header");
    long nv = 0, nf = 0, ne = 0;
    if (!(is >> nv >> nf >> ne)) throw std::invalid_argument("OFF: bad counts");
    TriangulatedSurface m;
    m.vertices.resize(nv);
    for (long i = 0; i < nv; ++i)
        if (!(is >> m.vertices[i].x >> m.vertices[i].y >> m.vertices[i].z))
            throw std::invalid_argument("OFF: bad vertex");
    m.triangles.resize(nf);
    for (long f = 0; f < nf; ++f) {
        int cnt = 0;
        if (!(is >> cnt)) throw std::invalid_argument("OFF: bad face");
        if (cnt != 3) throw std::invalid_argument("OFF: only triangular faces supported");
        if (!(is >> m.triangles[f][0] >> m.triangles[f][1] >> m.triangles[f][2]))
            throw std::invalid_argument("OFF: bad face indices");
    }
    return m;
}

inline TriangulatedSurface read_obj(std::istream& is) {
    TriangulatedSurface m;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            Point3 p;
            if (!(ls >> p.x >> p.y >> p.z)) throw std::invalid_argument("OBJ: bad vertex");
            m.vertices.push_back(p);
        } else if (tag == "f") {
            std::array<int, 3> tri{};
            int got = 0;
            std::string vert;
            while (ls >> vert) {
                if (got >= 3)
                    throw std::invalid_argument("OBJ: only triangular faces supported");
                // "i", "i/t", "i//n", "i/t/n" all start with the vertex index
                tri[got++] = std::stoi(vert.substr(0, vert.find('/'))) - 1;
            }
            if (got != 3) throw std::invalid_argument("OBJ: face needs 3 vertices");
            m.triangles.push_back(tri);
        }
    }
    return m;
}

inline void write_off(std::ostream& os, const TriangulatedSurface& m) {
    os << "OFF\n" << m.n_vertices() << " " << m.n_triangles() << " 0\n";
    os.precision(17);
    for (const auto& v : m.vertices) os << v.x << " " << v.y << " " << v.z << "\n";
    for (const auto& t : m.triangles) os << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
}

inline TriangulatedSurface load_mesh(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("load_mesh: cannot open " + path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".obj") return read_obj(is);
    return read_off(is);
}

}  // namespace biham
