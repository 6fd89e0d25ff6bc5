//! JSON reading and writing for instances, paths, solutions, LPs, and the
//! generator source problems.
//!
//! Numeric entries are JSON integers, reduced `"p/q"` strings, or `"-inf"`
//! (payoffs only). Row indices are 1-based in files and 0-based in memory.
//! Writers emit objects with sorted keys and reduced rationals, so equal
//! data always serializes to identical bytes.

use serde_json::{Map, Value};

use crate::approx::{AltVertex, ApproxSolution};
use crate::error::{Error, Result};
use crate::exact::ExactOutcome;
use crate::gadgets::{ExactCoverInput, KnapsackInput};
use crate::game::{CountProfile, Instance, PayoffMatrices, State};
use crate::lp::{Constraint, LinearProgram, LpOutcome, Relation};
use crate::single_peaked::{LineInstance, LineSolution};
use crate::value::{format_rat, parse_rat, CostValue, PayoffValue, Rat};

fn bad(ctx: &str, what: &str) -> Error {
    Error::InvalidInput(format!("{ctx}: {what}"))
}

fn root(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("not valid JSON: {e}")))
}

fn obj<'a>(v: &'a Value, ctx: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(ctx, "expected an object"))
}

fn field<'a>(o: &'a Map<String, Value>, key: &str, ctx: &str) -> Result<&'a Value> {
    o.get(key).ok_or_else(|| bad(ctx, &format!("missing field \"{key}\"")))
}

fn arr<'a>(v: &'a Value, ctx: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(ctx, "expected an array"))
}

fn uint(v: &Value, ctx: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| bad(ctx, "expected a nonnegative integer"))
}

fn size(v: &Value, ctx: &str) -> Result<usize> {
    Ok(uint(v, ctx)? as usize)
}

/// A rational entry: JSON integer or reduced "p/q" string.
fn rat_entry(v: &Value, ctx: &str) -> Result<Rat> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rat::from_integer(i.into()))
            } else if let Some(u) = n.as_u64() {
                Ok(Rat::from_integer(u.into()))
            } else {
                Err(bad(ctx, "expected an integer or \"p/q\" string, found a float"))
            }
        }
        Value::String(s) => {
            parse_rat(s).map_err(|e| bad(ctx, &e.to_string()))
        }
        _ => Err(bad(ctx, "expected an integer or \"p/q\" string")),
    }
}

/// A payoff entry: rational entry or the string "-inf".
fn payoff_entry(v: &Value, ctx: &str) -> Result<PayoffValue> {
    if v.as_str() == Some("-inf") {
        return Ok(PayoffValue::NegInf);
    }
    Ok(PayoffValue::Finite(rat_entry(v, ctx)?))
}

/// Integer when the reduced value is integral and fits, else "p/q" string.
fn rat_value(r: &Rat) -> Value {
    use num::ToPrimitive;
    if num::One::is_one(r.denom()) {
        if let Some(i) = r.numer().to_i64() {
            return Value::from(i);
        }
    }
    Value::from(format_rat(r))
}

fn payoff_value(p: &PayoffValue) -> Value {
    match p {
        PayoffValue::Finite(r) => rat_value(r),
        PayoffValue::NegInf => Value::from("-inf"),
    }
}

/// Costs always serialize as strings: reduced "p/q", or "inf".
fn cost_string(c: &CostValue) -> String {
    match c {
        CostValue::Finite(r) => format_rat(r),
        CostValue::PosInf => "inf".into(),
    }
}

fn state_entry(v: &Value, ctx: &str) -> Result<State> {
    let o = obj(v, ctx)?;
    let row_ctx = format!("{ctx}.row");
    let row = uint(field(o, "row", ctx)?, &row_ctx)?;
    if row == 0 {
        return Err(bad(&row_ctx, "rows are 1-based"));
    }
    let counts_ctx = format!("{ctx}.counts");
    let raw = arr(field(o, "counts", ctx)?, &counts_ctx)?;
    let mut counts = Vec::with_capacity(raw.len());
    for (i, c) in raw.iter().enumerate() {
        counts.push(uint(c, &format!("{counts_ctx}[{i}]"))?);
    }
    Ok(State::new(row as usize - 1, CountProfile::new(counts)))
}

fn state_value(s: &State) -> Value {
    let mut o = Map::new();
    o.insert("row".into(), Value::from(s.row as u64 + 1));
    o.insert("counts".into(), Value::from(s.cols.counts().to_vec()));
    Value::Object(o)
}

fn matrix_entries(v: &Value, name: &str, m: usize, n: usize) -> Result<Vec<Vec<PayoffValue>>> {
    let rows = arr(v, name)?;
    if rows.len() != m {
        return Err(bad(name, &format!("expected {} rows per \"m\", found {}", m, rows.len())));
    }
    let mut out = Vec::with_capacity(m);
    for (i, row) in rows.iter().enumerate() {
        let row_ctx = format!("{name}[{i}]");
        let cells = arr(row, &row_ctx)?;
        if cells.len() != n {
            return Err(bad(
                &row_ctx,
                &format!("expected {} columns per \"n\", found {}", n, cells.len()),
            ));
        }
        let mut parsed = Vec::with_capacity(n);
        for (j, cell) in cells.iter().enumerate() {
            parsed.push(payoff_entry(cell, &format!("{name}[{i}][{j}]"))?);
        }
        out.push(parsed);
    }
    Ok(out)
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let v = root(text)?;
    instance_from_value(&v)
}

fn instance_from_value(v: &Value) -> Result<Instance> {
    let o = obj(v, "instance")?;
    let m = size(field(o, "m", "instance")?, "m")?;
    let n = size(field(o, "n", "instance")?, "n")?;
    let k = uint(field(o, "k", "instance")?, "k")?;
    let r = matrix_entries(field(o, "R", "instance")?, "R", m, n)?;
    let c = matrix_entries(field(o, "C", "instance")?, "C", m, n)?;
    let mats = PayoffMatrices::new(r, c)?;
    let initial = state_entry(field(o, "initial", "instance")?, "initial")?;
    let target = state_entry(field(o, "target", "instance")?, "target")?;
    Instance::new(mats, k, initial, target)
}

pub fn instance_to_json(inst: &Instance) -> String {
    let mats = inst.matrices();
    let matrix = |rows: &[Vec<PayoffValue>]| -> Value {
        Value::from(
            rows.iter()
                .map(|r| Value::from(r.iter().map(payoff_value).collect::<Vec<_>>()))
                .collect::<Vec<_>>(),
        )
    };
    let mut o = Map::new();
    o.insert("m".into(), Value::from(inst.m() as u64));
    o.insert("n".into(), Value::from(inst.n() as u64));
    o.insert("k".into(), Value::from(inst.k()));
    o.insert("R".into(), matrix(mats.r_rows()));
    o.insert("C".into(), matrix(mats.c_rows()));
    o.insert("initial".into(), state_value(inst.initial()));
    o.insert("target".into(), state_value(inst.target()));
    pretty(&Value::Object(o))
}

pub fn parse_line_instance(text: &str) -> Result<LineInstance> {
    let v = root(text)?;
    line_instance_from_value(&v)
}

fn line_instance_from_value(v: &Value) -> Result<LineInstance> {
    let o = obj(v, "line instance")?;
    let raw = arr(field(o, "locations", "line instance")?, "locations")?;
    let mut locations = Vec::with_capacity(raw.len());
    for (i, l) in raw.iter().enumerate() {
        locations.push(rat_entry(l, &format!("locations[{i}]"))?);
    }
    let k = uint(field(o, "k", "line instance")?, "k")?;
    let g = obj(field(o, "g", "line instance")?, "g")?;
    let kind = field(g, "type", "g")?
        .as_str()
        .ok_or_else(|| bad("g.type", "expected a string"))?;
    if kind != "linear" {
        return Err(bad("g.type", "only \"linear\" distance costs are supported"));
    }
    let slope = rat_entry(field(g, "slope", "g")?, "g.slope")?;
    let initial = state_entry(field(o, "initial", "line instance")?, "initial")?;
    let target = state_entry(field(o, "target", "line instance")?, "target")?;
    LineInstance::new(locations, k, slope, initial, target)
}

pub fn line_instance_to_json(li: &LineInstance) -> String {
    let mut g = Map::new();
    g.insert("type".into(), Value::from("linear"));
    g.insert("slope".into(), rat_value(li.g_slope()));
    let mut o = Map::new();
    o.insert("locations".into(), Value::from(li.locations().iter().map(rat_value).collect::<Vec<_>>()));
    o.insert("k".into(), Value::from(li.k()));
    o.insert("g".into(), Value::Object(g));
    o.insert("initial".into(), state_value(li.initial()));
    o.insert("target".into(), state_value(li.target()));
    pretty(&Value::Object(o))
}

/// Either instance format, distinguished by the "locations" field.
#[derive(Debug, Clone)]
pub enum InstanceFile {
    General(Instance),
    Line(LineInstance),
}

pub fn parse_instance_file(text: &str) -> Result<InstanceFile> {
    let v = root(text)?;
    let o = obj(&v, "instance")?;
    if o.contains_key("locations") {
        Ok(InstanceFile::Line(line_instance_from_value(&v)?))
    } else {
        Ok(InstanceFile::General(instance_from_value(&v)?))
    }
}

/// A candidate schedule: the "path" array of states, as written by the
/// solvers, so solution files can be fed straight back to verification.
pub fn parse_path_states(text: &str) -> Result<Vec<State>> {
    let v = root(text)?;
    let o = obj(&v, "path file")?;
    let raw = arr(field(o, "path", "path file")?, "path")?;
    let mut states = Vec::with_capacity(raw.len());
    for (i, s) in raw.iter().enumerate() {
        states.push(state_entry(s, &format!("path[{i}]"))?);
    }
    Ok(states)
}

pub fn states_to_path_json(states: &[State]) -> String {
    let mut o = Map::new();
    o.insert("path".into(), Value::from(states.iter().map(state_value).collect::<Vec<_>>()));
    pretty(&Value::Object(o))
}

fn path_value(states: &[State]) -> Value {
    Value::from(states.iter().map(state_value).collect::<Vec<_>>())
}

pub fn exact_outcome_to_json(out: &ExactOutcome) -> String {
    let mut o = Map::new();
    o.insert("method".into(), Value::from("exact"));
    match out {
        ExactOutcome::Optimal(sol) => {
            o.insert("cost".into(), Value::from(cost_string(&sol.opt_cost)));
            o.insert("path".into(), path_value(&sol.path.states));
            o.insert("states_explored".into(), Value::from(sol.states_explored));
        }
        ExactOutcome::Infeasible { states_explored, .. } => {
            o.insert("cost".into(), Value::from("inf"));
            o.insert("path".into(), Value::Array(vec![]));
            o.insert("states_explored".into(), Value::from(*states_explored));
        }
    }
    pretty(&Value::Object(o))
}

fn alt_vertex_value(v: &AltVertex) -> Value {
    let mut o = Map::new();
    match v {
        AltVertex::Row(i) => {
            o.insert("row".into(), Value::from(*i as u64 + 1));
        }
        AltVertex::Profile(p) => {
            o.insert("counts".into(), Value::from(p.counts().to_vec()));
        }
    }
    Value::Object(o)
}

pub fn approx_solution_to_json(sol: &ApproxSolution) -> String {
    let m = sol.meta.m();
    let weight_matrix = |pick: &dyn Fn(usize, usize) -> Rat| -> Value {
        let rows: Vec<Value> = (0..m)
            .map(|i| {
                Value::from(
                    (0..m)
                        .map(|j| Value::from(format_rat(&pick(i, j))))
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        Value::from(rows)
    };
    let zero = Rat::from_integer(0.into());
    let star = |i: usize, j: usize| -> Rat {
        sol.meta.pair(i, j).map_or_else(|| zero.clone(), |e| e.w_star.clone())
    };
    let rounded = |i: usize, j: usize| -> Rat {
        sol.meta.pair(i, j).map_or_else(|| zero.clone(), |e| e.w_rounded.clone())
    };
    let mut o = Map::new();
    o.insert("method".into(), Value::from("approx"));
    o.insert("cost".into(), Value::from(cost_string(&sol.total_cost)));
    o.insert("path".into(), path_value(&sol.path.states));
    o.insert("w_star_matrix".into(), weight_matrix(&star));
    o.insert("w_rounded_matrix".into(), weight_matrix(&rounded));
    o.insert("bound".into(), Value::from(format_rat(&sol.bound)));
    o.insert(
        "alternating_path".into(),
        Value::from(sol.alternating.vertices.iter().map(alt_vertex_value).collect::<Vec<_>>()),
    );
    pretty(&Value::Object(o))
}

pub fn line_solution_to_json(sol: &LineSolution) -> String {
    let mut o = Map::new();
    o.insert("method".into(), Value::from("single-peaked"));
    o.insert("cost".into(), Value::from(cost_string(&sol.total_cost)));
    o.insert("path".into(), path_value(&sol.path.states));
    o.insert(
        "alternating_path".into(),
        Value::from(sol.alternating.vertices.iter().map(alt_vertex_value).collect::<Vec<_>>()),
    );
    pretty(&Value::Object(o))
}

pub fn parse_lp(text: &str) -> Result<LinearProgram> {
    let v = root(text)?;
    let o = obj(&v, "lp")?;
    let raw_obj = arr(field(o, "objective", "lp")?, "objective")?;
    let mut objective = Vec::with_capacity(raw_obj.len());
    for (i, c) in raw_obj.iter().enumerate() {
        objective.push(rat_entry(c, &format!("objective[{i}]"))?);
    }
    let num_vars = objective.len();
    let raw_cons = arr(field(o, "constraints", "lp")?, "constraints")?;
    let mut constraints = Vec::with_capacity(raw_cons.len());
    for (i, c) in raw_cons.iter().enumerate() {
        let ctx = format!("constraints[{i}]");
        let co = obj(c, &ctx)?;
        let raw_coeffs = arr(field(co, "coeffs", &ctx)?, &format!("{ctx}.coeffs"))?;
        if raw_coeffs.len() != num_vars {
            return Err(bad(
                &format!("{ctx}.coeffs"),
                &format!("expected {} coefficients to match the objective, found {}", num_vars, raw_coeffs.len()),
            ));
        }
        let mut coeffs = Vec::with_capacity(raw_coeffs.len());
        for (j, x) in raw_coeffs.iter().enumerate() {
            coeffs.push(rat_entry(x, &format!("{ctx}.coeffs[{j}]"))?);
        }
        let rel_ctx = format!("{ctx}.rel");
        let rel = match field(co, "rel", &ctx)?.as_str() {
            Some("<=") => Relation::Le,
            Some(">=") => Relation::Ge,
            Some("=") | Some("==") => Relation::Eq,
            _ => return Err(bad(&rel_ctx, "expected \"<=\", \">=\", or \"=\"")),
        };
        let rhs = rat_entry(field(co, "rhs", &ctx)?, &format!("{ctx}.rhs"))?;
        constraints.push(Constraint::new(coeffs, rel, rhs));
    }
    Ok(LinearProgram { num_vars, objective, constraints })
}

pub fn lp_outcome_to_json(out: &LpOutcome) -> String {
    let mut o = Map::new();
    match out {
        LpOutcome::Optimal { value, solution } => {
            o.insert("status".into(), Value::from("optimal"));
            o.insert("value".into(), Value::from(format_rat(value)));
            o.insert(
                "solution".into(),
                Value::from(solution.iter().map(|x| Value::from(format_rat(x))).collect::<Vec<_>>()),
            );
        }
        LpOutcome::Infeasible => {
            o.insert("status".into(), Value::from("infeasible"));
        }
        LpOutcome::Unbounded => {
            o.insert("status".into(), Value::from("unbounded"));
        }
    }
    pretty(&Value::Object(o))
}

pub fn parse_cover_input(text: &str) -> Result<ExactCoverInput> {
    let v = root(text)?;
    let o = obj(&v, "cover input")?;
    let s = uint(field(o, "s", "cover input")?, "s")?;
    let raw = arr(field(o, "subsets", "cover input")?, "subsets")?;
    let mut subsets = Vec::with_capacity(raw.len());
    for (i, sub) in raw.iter().enumerate() {
        let ctx = format!("subsets[{i}]");
        let cells = arr(sub, &ctx)?;
        let mut parsed = Vec::with_capacity(cells.len());
        for (j, e) in cells.iter().enumerate() {
            parsed.push(uint(e, &format!("{ctx}[{j}]"))?);
        }
        subsets.push(parsed);
    }
    ExactCoverInput::new(s, subsets)
}

pub fn parse_knapsack_input(text: &str) -> Result<KnapsackInput> {
    let v = root(text)?;
    let o = obj(&v, "knapsack input")?;
    let nums = |key: &str| -> Result<Vec<u64>> {
        let raw = arr(field(o, key, "knapsack input")?, key)?;
        raw.iter()
            .enumerate()
            .map(|(i, x)| uint(x, &format!("{key}[{i}]")))
            .collect()
    };
    let weights = nums("weights")?;
    let values = nums("values")?;
    let capacity = uint(field(o, "W", "knapsack input")?, "W")?;
    let target = uint(field(o, "V", "knapsack input")?, "V")?;
    let k = uint(field(o, "k", "knapsack input")?, "k")?;
    let epsilon = match o.get("epsilon") {
        None | Some(Value::Null) => None,
        Some(e) => Some(rat_entry(e, "epsilon")?),
    };
    KnapsackInput::new(weights, values, capacity, target, k, epsilon)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializing in-memory JSON cannot fail");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{solve_exact, StateGraphSpec};
    use crate::solve_approx;
    use crate::testkit::canonical_instance;
    use crate::value::rat_int;

    #[test]
    fn instance_roundtrip_preserves_everything() {
        let inst = canonical_instance();
        let text = instance_to_json(&inst);
        let back = parse_instance(&text).unwrap();
        assert_eq!(inst, back);
        assert_eq!(text, instance_to_json(&back));
    }

    #[test]
    fn parses_mixed_entry_forms() {
        let text = r#"{
            "m": 2, "n": 2, "k": 1,
            "R": [[1, "1/2"], [0, "-inf"]],
            "C": [["3", 0], [0, 1]],
            "initial": {"row": 1, "counts": [1, 0]},
            "target": {"row": 1, "counts": [1, 0]}
        }"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.matrices().r(0, 1).as_finite().unwrap(), &Rat::new(1.into(), 2.into()));
        assert_eq!(inst.matrices().r(1, 1), &PayoffValue::NegInf);
        assert_eq!(inst.matrices().c(0, 0).as_finite().unwrap(), &rat_int(3));
        assert_eq!(inst.initial().row, 0);
    }

    #[test]
    fn errors_name_the_offending_field() {
        let missing_k = r#"{"m":1,"n":1,"R":[[0]],"C":[[0]],
            "initial":{"row":1,"counts":[1]},"target":{"row":1,"counts":[1]}}"#;
        let e = parse_instance(missing_k).unwrap_err().to_string();
        assert!(e.contains("\"k\""), "{e}");

        let bad_cell = r#"{"m":1,"n":2,"k":1,"R":[[0,"x"]],"C":[[0,0]],
            "initial":{"row":1,"counts":[1,0]},"target":{"row":1,"counts":[1,0]}}"#;
        let e = parse_instance(bad_cell).unwrap_err().to_string();
        assert!(e.contains("R[0][1]"), "{e}");

        let zero_row = r#"{"m":1,"n":1,"k":1,"R":[[0]],"C":[[0]],
            "initial":{"row":0,"counts":[1]},"target":{"row":1,"counts":[1]}}"#;
        let e = parse_instance(zero_row).unwrap_err().to_string();
        assert!(e.contains("initial.row"), "{e}");

        let bad_shape = r#"{"m":2,"n":1,"k":1,"R":[[0]],"C":[[0],[0]],
            "initial":{"row":1,"counts":[1]},"target":{"row":1,"counts":[1]}}"#;
        let e = parse_instance(bad_shape).unwrap_err().to_string();
        assert!(e.contains('R'), "{e}");

        let float = r#"{"m":1,"n":1,"k":1,"R":[[0.5]],"C":[[0]],
            "initial":{"row":1,"counts":[1]},"target":{"row":1,"counts":[1]}}"#;
        let e = parse_instance(float).unwrap_err().to_string();
        assert!(e.contains("float"), "{e}");
    }

    #[test]
    fn line_instance_roundtrip_and_type_check() {
        let li = crate::gadgets::gen_random_single_peaked(3, 2, 5, 6).unwrap();
        let text = line_instance_to_json(&li);
        let back = parse_line_instance(&text).unwrap();
        assert_eq!(li.locations(), back.locations());
        assert_eq!(li.g_slope(), back.g_slope());
        assert_eq!(li.initial(), back.initial());
        assert_eq!(text, line_instance_to_json(&back));

        let bad_g = text.replace("\"linear\"", "\"quadratic\"");
        let e = parse_line_instance(&bad_g).unwrap_err().to_string();
        assert!(e.contains("g.type"), "{e}");
    }

    #[test]
    fn instance_file_dispatches_on_locations() {
        let general = instance_to_json(&canonical_instance());
        assert!(matches!(parse_instance_file(&general).unwrap(), InstanceFile::General(_)));
        let line = line_instance_to_json(&crate::gadgets::gen_random_single_peaked(2, 1, 0, 3).unwrap());
        assert!(matches!(parse_instance_file(&line).unwrap(), InstanceFile::Line(_)));
    }

    #[test]
    fn exact_solution_serialization_is_reloadable() {
        let inst = canonical_instance();
        let out = solve_exact(&StateGraphSpec::new(&inst)).unwrap();
        let text = exact_outcome_to_json(&out);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["method"], "exact");
        assert_eq!(v["cost"], "2");
        assert_eq!(v["states_explored"], 6);
        assert_eq!(v["path"].as_array().unwrap().len(), 4);
        // Solution files double as path files for verification.
        let states = parse_path_states(&text).unwrap();
        assert_eq!(states.len(), 4);
        assert_eq!(&states[0], inst.initial());
        assert_eq!(&states[3], inst.target());
        // No wall-clock field: serialization must be run-independent.
        assert!(!text.contains("runtime"), "{text}");
    }

    #[test]
    fn approx_solution_serialization_has_diagnostics() {
        let inst = canonical_instance();
        let sol = solve_approx(&inst).unwrap();
        let text = approx_solution_to_json(&sol);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["method"], "approx");
        assert_eq!(v["cost"], "4");
        assert_eq!(v["bound"], "32");
        assert_eq!(v["w_star_matrix"][0][1], "2/3");
        assert_eq!(v["w_rounded_matrix"][1][0], "2");
        assert_eq!(v["w_star_matrix"][0][0], "0");
        assert!(v["alternating_path"].as_array().unwrap().len() >= 1);
        assert!(v.get("states_explored").is_none());
    }

    #[test]
    fn line_solution_serialization() {
        let li = crate::gadgets::gen_random_single_peaked(2, 2, 1, 2).unwrap();
        let sol = crate::single_peaked::solve_single_peaked(&li).unwrap();
        let text = line_solution_to_json(&sol);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["method"], "single-peaked");
        assert!(v["path"].as_array().unwrap().len() >= 1);
    }

    #[test]
    fn lp_roundtrip_and_outcomes() {
        let text = r#"{
            "objective": [1, "-2"],
            "constraints": [
                {"coeffs": [1, 1], "rel": "<=", "rhs": 4},
                {"coeffs": [1, 0], "rel": ">=", "rhs": "1/2"},
                {"coeffs": [0, 1], "rel": "=", "rhs": 1}
            ]
        }"#;
        let lp = parse_lp(text).unwrap();
        assert_eq!(lp.num_vars, 2);
        assert_eq!(lp.constraints.len(), 3);
        let out = crate::lp::solve_lp(&lp).unwrap();
        let rendered = lp_outcome_to_json(&out);
        let v: Value = serde_json::from_str(&rendered).unwrap();
        assert_eq!(v["status"], "optimal");
        assert_eq!(v["value"], "-3/2");
        assert_eq!(v["solution"][0], "1/2");
        assert_eq!(v["solution"][1], "1");

        let e = parse_lp(r#"{"objective":[1],"constraints":[{"coeffs":[1],"rel":"<","rhs":0}]}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("rel"), "{e}");
    }

    #[test]
    fn generator_inputs_parse() {
        let cover = parse_cover_input(r#"{"s":1,"subsets":[[1,2,3]]}"#).unwrap();
        assert_eq!(cover.s(), 1);
        assert_eq!(cover.w(), 1);
        let e = parse_cover_input(r#"{"s":1,"subsets":[[1,2]]}"#).unwrap_err().to_string();
        assert!(e.contains("3 distinct"), "{e}");

        let ks = parse_knapsack_input(
            r#"{"weights":[1],"values":[1],"W":1,"V":1,"k":1,"epsilon":"1/4"}"#,
        )
        .unwrap();
        assert_eq!(ks.epsilon(), &Rat::new(1.into(), 4.into()));
        let defaulted =
            parse_knapsack_input(r#"{"weights":[1],"values":[1],"W":1,"V":1,"k":1}"#).unwrap();
        assert_eq!(defaulted.epsilon(), &Rat::new(1.into(), 4.into()));
    }

    #[test]
    fn big_entries_fall_back_to_strings() {
        let huge = Rat::from_integer(num::BigInt::from(10).pow(40u32));
        assert_eq!(rat_value(&huge), Value::from(huge.numer().to_string()));
        assert_eq!(rat_entry(&rat_value(&huge), "x").unwrap(), huge);
    }
}
