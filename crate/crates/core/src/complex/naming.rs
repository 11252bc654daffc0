//! Vertex naming for derived complexes.
//!
//! Product vertices are written `<left>|<right>`; barycentric vertices are
//! written `{a,b,c}` with members in canonical order. Reserved characters
//! inside component ids are escaped with a backslash so both schemes stay
//! injective under nesting.

use super::{Simplex, VertexId};

fn escape_into(out: &mut String, id: &str, reserved: &[char]) {
    for ch in id.chars() {
        if ch == '\\' || reserved.contains(&ch) {
            out.push('\\');
        }
        out.push(ch);
    }
}

/// Id of the product vertex `(left, right)`.
pub fn product_vertex_id(left: &VertexId, right: &VertexId) -> VertexId {
    let mut out = String::with_capacity(left.as_str().len() + right.as_str().len() + 1);
    escape_into(&mut out, left.as_str(), &['|']);
    out.push('|');
    escape_into(&mut out, right.as_str(), &['|']);
    VertexId::from(out)
}

/// Id of the barycentric vertex standing for `simplex`.
pub fn bary_vertex_id(simplex: &Simplex) -> VertexId {
    let mut out = String::from("{");
    for (k, v) in simplex.vertices().iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        escape_into(&mut out, v.as_str(), &[',', '{', '}']);
    }
    out.push('}');
    VertexId::from(out)
}

/// Splits a product id at its unescaped separator and unescapes both halves.
pub fn split_product_id(id: &VertexId) -> Option<(VertexId, VertexId)> {
    let mut parts = vec![String::new()];
    let mut chars = id.as_str().chars();
    while let Some(ch) = chars.next() {
        match ch {
            '\\' => parts.last_mut()?.push(chars.next()?),
            '|' => parts.push(String::new()),
            _ => parts.last_mut()?.push(ch),
        }
    }
    if parts.len() != 2 {
        return None;
    }
    let right = parts.pop()?;
    let left = parts.pop()?;
    Some((VertexId::from(left), VertexId::from(right)))
}
