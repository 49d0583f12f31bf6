//! ASCII OFF triangle meshes.
//!
//! Layout: an `OFF` header line, a counts line `nv nf ne`, `nv` vertex lines
//! and `nf` face lines of the form `3 i j k`. Blank lines and `#` comments are
//! skipped.

use std::path::Path;

use foldylax_core::mesh::SurfaceMesh;
use foldylax_core::Vec3;

use crate::CliError;

pub fn read_off(path: &Path) -> Result<SurfaceMesh, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read mesh {}: {e}", path.display())))?;
    parse_off(&text).map_err(|msg| CliError::invalid(format!("mesh {}: {msg}", path.display())))
}

pub fn parse_off(text: &str) -> Result<SurfaceMesh, String> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (n, header) = lines.next().ok_or("file is empty")?;
    let mut header_tokens = header.split_whitespace();
    if header_tokens.next() != Some("OFF") {
        return Err(format!("line {n}: expected the OFF header"));
    }
    // Some writers put the counts on the header line.
    let rest: Vec<&str> = header_tokens.collect();
    let (n, counts) = if rest.is_empty() {
        let (n, l) = lines.next().ok_or("missing counts line")?;
        (n, l.split_whitespace().collect::<Vec<_>>())
    } else {
        (n, rest)
    };
    if counts.len() < 2 {
        return Err(format!("line {n}: expected `vertices faces edges`"));
    }
    let nv: usize = parse_token(counts[0], n, "vertex count")?;
    let nf: usize = parse_token(counts[1], n, "face count")?;

    let mut vertices: Vec<Vec3> = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (n, l) = lines.next().ok_or("fewer vertex lines than declared")?;
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() < 3 {
            return Err(format!("line {n}: a vertex needs three coordinates"));
        }
        let mut v = [0.0; 3];
        for (c, tok) in v.iter_mut().zip(&t) {
            *c = parse_token(tok, n, "coordinate")?;
        }
        vertices.push(v);
    }
    let mut triangles = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (n, l) = lines.next().ok_or("fewer face lines than declared")?;
        let t: Vec<&str> = l.split_whitespace().collect();
        let count: usize = parse_token(t.first().copied().unwrap_or(""), n, "face size")?;
        if count != 3 || t.len() < 4 {
            return Err(format!("line {n}: only triangles (`3 i j k`) are supported"));
        }
        let mut tri = [0usize; 3];
        for (c, tok) in tri.iter_mut().zip(&t[1..4]) {
            *c = parse_token(tok, n, "vertex index")?;
            if *c >= nv {
                return Err(format!("line {n}: vertex index {c} out of range (mesh has {nv} vertices)"));
            }
        }
        triangles.push(tri);
    }
    SurfaceMesh::new(vertices, triangles).map_err(|e| e.to_string())
}

pub fn write_off(mesh: &SurfaceMesh) -> String {
    let mut out = format!("OFF\n{} {} 0\n", mesh.vertices().len(), mesh.triangles().len());
    for v in mesh.vertices() {
        out.push_str(&format!("{:.16e} {:.16e} {:.16e}\n", v[0], v[1], v[2]));
    }
    for t in mesh.triangles() {
        out.push_str(&format!("3 {} {} {}\n", t[0], t[1], t[2]));
    }
    out
}

fn parse_token<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, String> {
    tok.parse()
        .map_err(|_| format!("line {line}: cannot parse {what} from `{tok}`"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TETRA: &str = "OFF\n# tetrahedron\n4 4 6\n1 1 1\n-1 -1 1\n-1 1 -1\n1 -1 -1\n3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n";

    #[test]
    fn parses_tetrahedron() {
        let mesh = parse_off(TETRA).unwrap();
        assert_eq!(mesh.panel_count(), 4);
        assert!(mesh.signed_volume() > 0.0);
    }

    #[test]
    fn round_trips_icosphere() {
        let mesh = SurfaceMesh::icosphere(0.5, 1).unwrap();
        let back = parse_off(&write_off(&mesh)).unwrap();
        assert_eq!(back.vertices(), mesh.vertices());
        assert_eq!(back.triangles(), mesh.triangles());
    }

    #[test]
    fn rejects_quads_and_bad_indices() {
        let quad = "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n";
        assert!(parse_off(quad).unwrap_err().contains("only triangles"));
        let bad = TETRA.replace("3 1 2 3", "3 1 2 9");
        assert!(parse_off(&bad).unwrap_err().contains("out of range"));
        assert!(parse_off("PLY\n").unwrap_err().contains("OFF header"));
    }
}
