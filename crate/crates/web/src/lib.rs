//! Browser bindings: every export takes plain numbers or arrays and returns a
//! JSON string, so the page needs no generated TypeScript types.
//!
//! The `*_json` functions hold the logic and are what the native tests call;
//! the `#[wasm_bindgen]` wrappers only convert errors.

use algebra_learn::group::{
    groups_of_order, is_group_table, is_simple, quadrangle_criterion, subgroups, GroupTable,
};
use algebra_learn::latin::{random_latin_square, LatinSquare};
use algebra_learn::ring::{cyclic_product_ring, is_ring_pair, RingTables};
use algebra_learn::Error;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest order the page renders.
pub const MAX_ORDER: usize = 16;

fn check_order(n: usize) -> Result<(), String> {
    if (1..=MAX_ORDER).contains(&n) {
        Ok(())
    } else {
        Err(format!("order must lie in 1..={MAX_ORDER}, got {n}"))
    }
}

/// Verdicts for an arbitrary `n x n` array with entries `1..=n`.
pub fn square_verdicts_json(n: usize, cells: Vec<u32>) -> Result<Value, String> {
    check_order(n)?;
    if cells.len() != n * n {
        return Err(format!("expected {} cells, got {}", n * n, cells.len()));
    }
    let (latin, quadrangle, group) = match LatinSquare::new(n, cells.clone()) {
        Ok(sq) => (true, quadrangle_criterion(&sq), is_group_table(&sq)),
        Err(Error::NotLatin(_)) => (false, false, false),
        Err(e) => return Err(e.to_string()),
    };
    // structure is only meaningful when the array is itself a reduced Cayley table
    let structure = GroupTable::new("table", n, cells.clone()).ok().map(|g| {
        let lattice = subgroups(&g).ok();
        json!({
            "abelian": g.is_abelian(),
            "simple": is_simple(&g),
            "subgroups": lattice.as_ref().map(|l| l.total()),
            "iso_classes": lattice.map(|l| l.iso_classes),
        })
    });
    Ok(json!({ "n": n, "cells": cells, "latin": latin, "quadrangle": quadrangle,
        "group_table": group, "structure": structure }))
}

pub fn group_names_json(n: usize) -> Result<Value, String> {
    check_order(n)?;
    Ok(json!(groups_of_order(n).iter().map(|g| g.name().to_string()).collect::<Vec<_>>()))
}

/// Cayley table of a catalog group, optionally under random row and column
/// permutations drawn from `seed`.
pub fn group_table_json(n: usize, name: &str, permute: bool, seed: u32) -> Result<Value, String> {
    check_order(n)?;
    let g = groups_of_order(n)
        .into_iter()
        .find(|g| g.name() == name)
        .ok_or_else(|| format!("no group named {name} of order {n}"))?;
    let mut cells = g.cells().to_vec();
    if permute {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.into());
        let mut rows: Vec<usize> = (0..n).collect();
        let mut cols = rows.clone();
        rows.shuffle(&mut rng);
        cols.shuffle(&mut rng);
        let sq =
            LatinSquare::new(n, cells).and_then(|s| s.permute(&rows, &cols)).map_err(|e| e.to_string())?;
        cells = sq.cells().to_vec();
    }
    let mut v = square_verdicts_json(n, cells)?;
    v["name"] = json!(g.name());
    Ok(v)
}

pub fn random_square_json(n: usize, seed: u32) -> Result<Value, String> {
    check_order(n)?;
    square_verdicts_json(n, random_latin_square(n, seed.into()).cells().to_vec())
}

fn ring_verdict(r: &RingTables) -> Value {
    let n = r.n;
    let in_range = r.mult.iter().chain(&r.add).all(|&v| v >= 1 && v as usize <= n);
    let violation = if in_range {
        r.first_distributivity_violation().map(|(a, b, c)| json!([a + 1, b + 1, c + 1]))
    } else {
        None
    };
    json!({ "n": n, "moduli": r.moduli, "mult": r.mult, "add": r.add,
        "ring": is_ring_pair(n, &r.mult, &r.add), "violation": violation })
}

/// Tables of `Z/m1 x .. x Z/mk` from a comma-separated moduli list.
pub fn ring_json(moduli: &str) -> Result<Value, String> {
    let moduli: Vec<usize> = moduli
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| format!("bad modulus `{}`", s.trim())))
        .collect::<Result<_, _>>()?;
    let r = cyclic_product_ring(&moduli).map_err(|e| e.to_string())?;
    check_order(r.n)?;
    Ok(ring_verdict(&r))
}

/// Re-checks a (possibly edited) multiplication and addition table pair.
pub fn check_ring_json(n: usize, mult: Vec<u32>, add: Vec<u32>) -> Result<Value, String> {
    check_order(n)?;
    if mult.len() != n * n || add.len() != n * n {
        return Err(format!("both tables need {} cells", n * n));
    }
    Ok(ring_verdict(&RingTables { n, moduli: Vec::new(), mult, add }))
}

fn out(v: Result<Value, String>) -> Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn group_names(n: usize) -> Result<String, JsError> {
    out(group_names_json(n))
}

#[wasm_bindgen]
pub fn group_table(n: usize, name: &str, permute: bool, seed: u32) -> Result<String, JsError> {
    out(group_table_json(n, name, permute, seed))
}

#[wasm_bindgen]
pub fn random_square(n: usize, seed: u32) -> Result<String, JsError> {
    out(random_square_json(n, seed))
}

#[wasm_bindgen]
pub fn check_square(n: usize, cells: Vec<u32>) -> Result<String, JsError> {
    out(square_verdicts_json(n, cells))
}

#[wasm_bindgen]
pub fn ring(moduli: &str) -> Result<String, JsError> {
    out(ring_json(moduli))
}

#[wasm_bindgen]
pub fn check_ring(n: usize, mult: Vec<u32>, add: Vec<u32>) -> Result<String, JsError> {
    out(check_ring_json(n, mult, add))
}
