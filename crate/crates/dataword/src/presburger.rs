//! Existential Presburger formulas over Parikh images, an integer-feasibility
//! core, and the emptiness engine for Presburger automata (NFA + formula).
//!
//! The flow encoding follows the classic scheme: pick a set of transitions
//! (the support), require every support transition to be used at least once,
//! impose Euler-path flow conservation between the initial and a final state,
//! tie per-symbol counts to transition counts, and conjoin the formula. The
//! word is then read off by Euler-path construction over the solved
//! transition multiplicities. Connectivity is guaranteed by enumerating only
//! supports whose transitions are all reachable from the initial state.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{nfa_run_exists, Nfa, Symbol, TransitionSystem};

/// Shape of an atomic linear constraint. Equality atoms are sugar for the two
/// inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum AtomKind {
    SumLeqSum,
    SumLeqConst,
    SumGeqConst,
    SumEqSum,
    SumEqConst,
}

/// `x_1 + … + x_n (≤|≥|=) y_1 + … + y_m` or a constant on the right-hand
/// side. Variables are ids; repetition encodes coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearAtom {
    pub kind: AtomKind,
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
    pub constant: u64,
}

impl LinearAtom {
    pub fn sum_leq_sum(lhs: Vec<usize>, rhs: Vec<usize>) -> Self {
        LinearAtom { kind: AtomKind::SumLeqSum, lhs, rhs, constant: 0 }
    }
    pub fn sum_leq_const(lhs: Vec<usize>, constant: u64) -> Self {
        LinearAtom { kind: AtomKind::SumLeqConst, lhs, rhs: Vec::new(), constant }
    }
    pub fn sum_geq_const(lhs: Vec<usize>, constant: u64) -> Self {
        LinearAtom { kind: AtomKind::SumGeqConst, lhs, rhs: Vec::new(), constant }
    }
    pub fn sum_eq_sum(lhs: Vec<usize>, rhs: Vec<usize>) -> Self {
        LinearAtom { kind: AtomKind::SumEqSum, lhs, rhs, constant: 0 }
    }
    pub fn sum_eq_const(lhs: Vec<usize>, constant: u64) -> Self {
        LinearAtom { kind: AtomKind::SumEqConst, lhs, rhs: Vec::new(), constant }
    }

    fn max_var(&self) -> Option<usize> {
        self.lhs.iter().chain(self.rhs.iter()).copied().max()
    }
}

/// Boolean combination over linear atoms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoolExpr {
    True,
    False,
    Atom(LinearAtom),
    And(Vec<BoolExpr>),
    Or(Vec<BoolExpr>),
    Not(Box<BoolExpr>),
}

/// An existential Presburger formula `∃ z̄ ψ(x̄, z̄)` with one free variable
/// per alphabet symbol (ids `0..free_count`) and `bound_count` bound
/// variables (ids `free_count..`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EPFormula {
    pub free_count: usize,
    pub bound_count: usize,
    pub matrix: BoolExpr,
}

impl EPFormula {
    pub fn truth(free_count: usize) -> Self {
        EPFormula { free_count, bound_count: 0, matrix: BoolExpr::True }
    }

    fn check_vars(&self) -> Result<(), EvalError> {
        fn walk(e: &BoolExpr, max: usize) -> Result<(), EvalError> {
            match e {
                BoolExpr::True | BoolExpr::False => Ok(()),
                BoolExpr::Atom(a) => match a.max_var() {
                    Some(v) if v >= max => Err(EvalError::MissingVariable(v)),
                    _ => Ok(()),
                },
                BoolExpr::And(xs) | BoolExpr::Or(xs) => xs.iter().try_for_each(|x| walk(x, max)),
                BoolExpr::Not(x) => walk(x, max),
            }
        }
        walk(&self.matrix, self.free_count + self.bound_count)
    }
}

/// Per-symbol occurrence counts of a finite word, in alphabet order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParikhVector {
    pub counts: Vec<u64>,
}

impl ParikhVector {
    pub fn of_word(alphabet_len: usize, word: &[Symbol]) -> Self {
        let mut counts = vec![0u64; alphabet_len];
        for s in word {
            counts[s.index()] += 1;
        }
        ParikhVector { counts }
    }
}

/// An NFA paired with a formula constraining the Parikh image of accepted
/// words.
#[derive(Debug, Clone)]
pub struct PresburgerAutomaton {
    pub nfa: Nfa,
    pub formula: EPFormula,
}

impl PresburgerAutomaton {
    pub fn new(nfa: Nfa, formula: EPFormula) -> Self {
        assert_eq!(nfa.ts.alphabet.len(), formula.free_count, "alphabet mismatch");
        PresburgerAutomaton { nfa, formula }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("formula references undeclared variable {0}")]
    MissingVariable(usize),
    #[error("assignment length mismatch")]
    AssignmentLength,
}

/// Evaluates the matrix under a complete assignment of free and bound
/// variables.
pub fn eval_formula(
    f: &EPFormula,
    assignment: &ParikhVector,
    bound_assignment: &[u64],
) -> Result<bool, EvalError> {
    if assignment.counts.len() != f.free_count || bound_assignment.len() != f.bound_count {
        return Err(EvalError::AssignmentLength);
    }
    f.check_vars()?;
    let value = |v: usize| {
        if v < f.free_count {
            assignment.counts[v]
        } else {
            bound_assignment[v - f.free_count]
        }
    };
    fn eval(e: &BoolExpr, value: &dyn Fn(usize) -> u64) -> bool {
        match e {
            BoolExpr::True => true,
            BoolExpr::False => false,
            BoolExpr::Atom(a) => {
                let l: u64 = a.lhs.iter().map(|&v| value(v)).sum();
                let r: u64 = a.rhs.iter().map(|&v| value(v)).sum();
                match a.kind {
                    AtomKind::SumLeqSum => l <= r,
                    AtomKind::SumLeqConst => l <= a.constant,
                    AtomKind::SumGeqConst => l >= a.constant,
                    AtomKind::SumEqSum => l == r,
                    AtomKind::SumEqConst => l == a.constant,
                }
            }
            BoolExpr::And(xs) => xs.iter().all(|x| eval(x, value)),
            BoolExpr::Or(xs) => xs.iter().any(|x| eval(x, value)),
            BoolExpr::Not(x) => !eval(x, value),
        }
    }
    Ok(eval(&f.matrix, &value))
}

// ---------------------------------------------------------------------------
// Normalized atoms and the integer-feasibility core.
// ---------------------------------------------------------------------------

/// `Σ lhs + lhs_c ≤ Σ rhs + rhs_c` over nonnegative integers; closed under
/// negation (swap sides, add one).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct NormAtom {
    pub lhs: Vec<usize>,
    pub lhs_c: u64,
    pub rhs: Vec<usize>,
    pub rhs_c: u64,
}

impl NormAtom {
    pub fn leq(lhs: Vec<usize>, rhs: Vec<usize>) -> Self {
        NormAtom { lhs, lhs_c: 0, rhs, rhs_c: 0 }
    }
    pub fn geq_const(vars: Vec<usize>, c: u64) -> Self {
        NormAtom { lhs: Vec::new(), lhs_c: c, rhs: vars, rhs_c: 0 }
    }
    pub fn leq_const(vars: Vec<usize>, c: u64) -> Self {
        NormAtom { lhs: vars, lhs_c: 0, rhs: Vec::new(), rhs_c: c }
    }
    pub fn eq_pair(lhs: Vec<usize>, rhs: Vec<usize>) -> [Self; 2] {
        [NormAtom::leq(lhs.clone(), rhs.clone()), NormAtom::leq(rhs, lhs)]
    }
    pub fn negated(&self) -> Self {
        // ¬(L + lc ≤ R + rc)  ≡  R + rc + 1 ≤ L + lc
        NormAtom {
            lhs: self.rhs.clone(),
            lhs_c: self.rhs_c + 1,
            rhs: self.lhs.clone(),
            rhs_c: self.lhs_c,
        }
    }
    pub fn shift_vars(&self, by: usize) -> Self {
        NormAtom {
            lhs: self.lhs.iter().map(|v| v + by).collect(),
            lhs_c: self.lhs_c,
            rhs: self.rhs.iter().map(|v| v + by).collect(),
            rhs_c: self.rhs_c,
        }
    }
}

fn norm_atoms_pos(a: &LinearAtom) -> Vec<NormAtom> {
    match a.kind {
        AtomKind::SumLeqSum => vec![NormAtom::leq(a.lhs.clone(), a.rhs.clone())],
        AtomKind::SumLeqConst => vec![NormAtom::leq_const(a.lhs.clone(), a.constant)],
        AtomKind::SumGeqConst => vec![NormAtom::geq_const(a.lhs.clone(), a.constant)],
        AtomKind::SumEqSum => NormAtom::eq_pair(a.lhs.clone(), a.rhs.clone()).into(),
        AtomKind::SumEqConst => vec![
            NormAtom::leq_const(a.lhs.clone(), a.constant),
            NormAtom::geq_const(a.lhs.clone(), a.constant),
        ],
    }
}

/// Negation of an atom as a disjunction of conjunctions of normalized atoms.
fn norm_atoms_neg(a: &LinearAtom) -> Vec<Vec<NormAtom>> {
    match a.kind {
        AtomKind::SumLeqSum => {
            vec![vec![NormAtom::leq(a.lhs.clone(), a.rhs.clone()).negated()]]
        }
        AtomKind::SumLeqConst => {
            vec![vec![NormAtom::geq_const(a.lhs.clone(), a.constant + 1)]]
        }
        AtomKind::SumGeqConst => {
            if a.constant == 0 {
                vec![] // x >= 0 is always true; negation unsatisfiable
            } else {
                vec![vec![NormAtom::leq_const(a.lhs.clone(), a.constant - 1)]]
            }
        }
        AtomKind::SumEqSum => {
            let [le, ge] = NormAtom::eq_pair(a.lhs.clone(), a.rhs.clone());
            vec![vec![le.negated()], vec![ge.negated()]]
        }
        AtomKind::SumEqConst => {
            let mut out = Vec::new();
            if a.constant > 0 {
                out.push(vec![NormAtom::leq_const(a.lhs.clone(), a.constant - 1)]);
            }
            out.push(vec![NormAtom::geq_const(a.lhs.clone(), a.constant + 1)]);
            out
        }
    }
}

/// Disjunctive normal form: a list of conjunctions of normalized atoms.
pub(crate) fn to_dnf(e: &BoolExpr) -> Vec<Vec<NormAtom>> {
    fn cross(a: Vec<Vec<NormAtom>>, b: Vec<Vec<NormAtom>>) -> Vec<Vec<NormAtom>> {
        let mut out = Vec::new();
        for x in &a {
            for y in &b {
                let mut c = x.clone();
                c.extend(y.iter().cloned());
                out.push(c);
            }
        }
        out
    }
    fn pos(e: &BoolExpr) -> Vec<Vec<NormAtom>> {
        match e {
            BoolExpr::True => vec![vec![]],
            BoolExpr::False => vec![],
            BoolExpr::Atom(a) => vec![norm_atoms_pos(a)],
            BoolExpr::And(xs) => xs.iter().fold(vec![vec![]], |acc, x| cross(acc, pos(x))),
            BoolExpr::Or(xs) => xs.iter().flat_map(pos).collect(),
            BoolExpr::Not(x) => neg(x),
        }
    }
    fn neg(e: &BoolExpr) -> Vec<Vec<NormAtom>> {
        match e {
            BoolExpr::True => vec![],
            BoolExpr::False => vec![vec![]],
            BoolExpr::Atom(a) => norm_atoms_neg(a),
            BoolExpr::And(xs) => xs.iter().flat_map(neg).collect(),
            BoolExpr::Or(xs) => xs.iter().fold(vec![vec![]], |acc, x| cross(acc, neg(x))),
            BoolExpr::Not(x) => pos(x),
        }
    }
    pos(e)
}

/// Search-effort counters, reported by the CLI and bounded by acceptance
/// tests.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub supports_tried: u64,
    pub branches_tried: u64,
    pub ilp_nodes: u64,
    pub relaxed_mode: bool,
}

const DEFAULT_NODE_CAP: u64 = 2_000_000;
const BOUND_CAP: u64 = 1 << 40;

/// Small-solution bound `n·(m·(a_max+1))^(2m+1)`, capped.
fn solution_bound(atoms: &[NormAtom], var_count: usize) -> u64 {
    let n = var_count.max(1) as u128;
    let m = atoms.len().max(1) as u128;
    let mut a_max: u128 = 1;
    for a in atoms {
        let mut mult: BTreeMap<usize, u128> = BTreeMap::new();
        for &v in a.lhs.iter().chain(a.rhs.iter()) {
            *mult.entry(v).or_insert(0) += 1;
        }
        for (_, k) in mult {
            a_max = a_max.max(k);
        }
        a_max = a_max.max(a.lhs_c as u128).max(a.rhs_c as u128);
    }
    let base = m * (a_max + 1);
    let mut bound: u128 = n;
    for _ in 0..(2 * m + 1) {
        bound = bound.saturating_mul(base);
        if bound >= BOUND_CAP as u128 {
            return BOUND_CAP;
        }
    }
    (bound as u64).max(1)
}

/// Branch-and-bound over nonnegative integers with interval propagation and
/// exact rational LP pruning. Returns a satisfying assignment or `None`;
/// complete up to the bound.
pub(crate) fn solve_system(
    atoms: &[NormAtom],
    var_count: usize,
    bound_override: Option<u64>,
    nodes: &mut u64,
) -> Option<Vec<u64>> {
    let bound = bound_override.unwrap_or_else(|| solution_bound(atoms, var_count));
    let lo = vec![0u64; var_count];
    let hi = vec![bound; var_count];
    branch(atoms, lo, hi, nodes)
}

fn atom_holds(a: &NormAtom, val: &[u64]) -> bool {
    let l: u128 = a.lhs.iter().map(|&v| val[v] as u128).sum::<u128>() + a.lhs_c as u128;
    let r: u128 = a.rhs.iter().map(|&v| val[v] as u128).sum::<u128>() + a.rhs_c as u128;
    l <= r
}

/// Tightens `lo`/`hi` against all atoms. Iteration-capped: divergent chains
/// (lower bounds climbing without limit) are left to the LP relaxation,
/// which refutes them exactly. Returns false on wipeout.
fn propagate(atoms: &[NormAtom], lo: &mut [u64], hi: &mut [u64]) -> bool {
    let max_passes = 2 * lo.len() + 8;
    for _pass in 0..max_passes {
        let mut changed = false;
        for a in atoms {
            let lhs_min: u128 =
                a.lhs.iter().map(|&v| lo[v] as u128).sum::<u128>() + a.lhs_c as u128;
            let rhs_max: u128 =
                a.rhs.iter().map(|&v| hi[v] as u128).sum::<u128>() + a.rhs_c as u128;
            if lhs_min > rhs_max {
                return false;
            }
            // Upper bounds for lhs variables.
            let slack = rhs_max - lhs_min;
            let mut mult: BTreeMap<usize, u128> = BTreeMap::new();
            for &v in &a.lhs {
                *mult.entry(v).or_insert(0) += 1;
            }
            for (&v, &k) in &mult {
                let new_hi = (lo[v] as u128).saturating_add(slack / k);
                if (hi[v] as u128) > new_hi {
                    hi[v] = new_hi as u64;
                    if hi[v] < lo[v] {
                        return false;
                    }
                    changed = true;
                }
            }
            // Lower bounds for rhs variables: Σrhs + rhs_c >= lhs_min.
            let mut rmult: BTreeMap<usize, u128> = BTreeMap::new();
            for &v in &a.rhs {
                *rmult.entry(v).or_insert(0) += 1;
            }
            let rhs_max_total = rhs_max;
            for (&v, &k) in &rmult {
                // Largest the others can supply:
                let others = rhs_max_total - k * (hi[v] as u128);
                if lhs_min > others {
                    let need = lhs_min - others;
                    let new_lo = need.div_ceil(k);
                    if (lo[v] as u128) < new_lo {
                        if new_lo > hi[v] as u128 {
                            return false;
                        }
                        lo[v] = new_lo as u64;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return true;
        }
    }
    true
}

/// LP rows for the atoms plus box constraints, over `y = x − lo ≥ 0`.
fn lp_rows(atoms: &[NormAtom], lo: &[u64], hi: &[u64]) -> Option<Vec<crate::simplex::LpRow>> {
    let n = lo.len();
    let mut rows = Vec::with_capacity(atoms.len() + n);
    for a in atoms {
        // Σ lhs + lhs_c ≤ Σ rhs + rhs_c  →  Σ (mult_lhs − mult_rhs)·x ≤ rhs_c − lhs_c.
        let mut coeffs = vec![0i64; n];
        for &v in &a.lhs {
            coeffs[v] += 1;
        }
        for &v in &a.rhs {
            coeffs[v] -= 1;
        }
        let mut rhs: i128 = a.rhs_c as i128 - a.lhs_c as i128;
        // Translate x = lo + y.
        for (v, &c) in coeffs.iter().enumerate() {
            rhs -= c as i128 * lo[v] as i128;
        }
        let rhs = i64::try_from(rhs).ok()?;
        rows.push(crate::simplex::LpRow { coeffs, rhs });
    }
    for v in 0..n {
        let mut coeffs = vec![0i64; n];
        coeffs[v] = 1;
        let span = i64::try_from(hi[v] - lo[v]).ok()?;
        rows.push(crate::simplex::LpRow { coeffs, rhs: span });
    }
    Some(rows)
}

fn branch(atoms: &[NormAtom], mut lo: Vec<u64>, mut hi: Vec<u64>, nodes: &mut u64) -> Option<Vec<u64>> {
    use num_traits::ToPrimitive;
    *nodes += 1;
    if *nodes > DEFAULT_NODE_CAP {
        return None;
    }
    if !propagate(atoms, &mut lo, &mut hi) {
        return None;
    }
    // All-lower-bounds heuristic: gives minimal witnesses on the common path.
    if atoms.iter().all(|a| atom_holds(a, &lo)) {
        return Some(lo);
    }
    let rows = lp_rows(atoms, &lo, &hi)?;
    let point = crate::simplex::lp_feasible(&rows, lo.len())?;
    // Try the floor of the LP point, then find a fractional coordinate.
    let mut floored = lo.clone();
    let mut fractional: Option<(usize, u64)> = None;
    for (v, y) in point.iter().enumerate() {
        let fl = y.floor().to_integer().to_u64().unwrap_or(0);
        floored[v] = (lo[v] + fl).min(hi[v]);
        if fractional.is_none() && !y.is_integer() {
            fractional = Some((v, lo[v] + fl));
        }
    }
    if atoms.iter().all(|a| atom_holds(a, &floored)) {
        return Some(floored);
    }
    let (split, at) = match fractional {
        Some(f) => f,
        // Integral LP point satisfies all atom rows already; the floored
        // candidate equals it, so this branch is unreachable unless bounds
        // clamped — fall back to interval splitting.
        None => {
            let v = (0..lo.len()).find(|&v| lo[v] < hi[v])?;
            (v, lo[v] + (hi[v] - lo[v]) / 2)
        }
    };
    let mut hi1 = hi.clone();
    hi1[split] = at;
    if let Some(sol) = branch(atoms, lo.clone(), hi1, nodes) {
        return Some(sol);
    }
    let mut lo1 = lo;
    lo1[split] = at + 1;
    branch(atoms, lo1, hi, nodes)
}

/// Satisfying nonnegative assignment for a conjunction of atoms, or `None`.
pub fn integer_feasible(atoms: &[LinearAtom], var_count: usize) -> Option<Vec<u64>> {
    integer_feasible_with_bound(atoms, var_count, None)
}

/// As [`integer_feasible`] with an explicit search bound override.
pub fn integer_feasible_with_bound(
    atoms: &[LinearAtom],
    var_count: usize,
    bound: Option<u64>,
) -> Option<Vec<u64>> {
    let norm: Vec<NormAtom> = atoms.iter().flat_map(norm_atoms_pos).collect();
    let mut nodes = 0;
    solve_system(&norm, var_count, bound, &mut nodes)
}

// ---------------------------------------------------------------------------
// Flow encoding and Euler-path word extraction.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub(crate) struct FlowOptions {
    /// Enumerate supports exactly when the relevant transition count is at
    /// most this; otherwise fall back to one relaxed query with repair.
    pub support_cap: usize,
    /// Skip supports larger than this many transitions (None = no limit).
    pub max_support: Option<usize>,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions { support_cap: 16, max_support: None }
    }
}

/// Feasibility of: some word from `initial` to `final_state` in `ts` whose
/// per-symbol counts `x` and the extra variables satisfy `extra_atoms`
/// (variable ids: `0..alphabet_len` are the `x` block, then the extras).
/// Returns the extracted word and the extra-variable assignment.
pub(crate) fn solve_flow(
    ts: &TransitionSystem,
    initial: usize,
    final_state: usize,
    extra_var_count: usize,
    extra_atoms: &[NormAtom],
    options: FlowOptions,
    stats: &mut SolveStats,
) -> Option<(Vec<Symbol>, Vec<u64>)> {
    let k = ts.alphabet.len();
    // Relevant transitions: reachable from initial and co-reachable to final.
    let reach = ts.reachable_from(initial);
    let mut co = std::collections::BTreeSet::new();
    co.insert(final_state);
    loop {
        let mut grew = false;
        for &(p, _, q) in ts.transitions() {
            if co.contains(&q) && co.insert(p) {
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    let relevant: Vec<(usize, Symbol, usize)> = ts
        .transitions()
        .iter()
        .copied()
        .filter(|&(p, _, q)| reach.contains(&p) && co.contains(&q) && co.contains(&p) && reach.contains(&q))
        .collect();

    if !reach.contains(&final_state) {
        return None;
    }

    if relevant.len() <= options.support_cap {
        // Exact support enumeration, ascending by size then lexicographic.
        let limit = options.max_support.unwrap_or(relevant.len()).min(relevant.len());
        for size in 0..=limit {
            let mut found = None;
            for_combinations(relevant.len(), size, &mut |idxs| {
                if found.is_some() {
                    return;
                }
                let support: Vec<(usize, Symbol, usize)> =
                    idxs.iter().map(|&i| relevant[i]).collect();
                stats.supports_tried += 1;
                if let Some(res) = try_support(
                    ts, initial, final_state, k, &support, extra_var_count, extra_atoms, true,
                    stats,
                ) {
                    found = Some(res);
                }
            });
            if let Some(res) = found {
                return Some(res);
            }
        }
        None
    } else {
        stats.relaxed_mode = true;
        stats.supports_tried += 1;
        try_support(
            ts, initial, final_state, k, &relevant, extra_var_count, extra_atoms, false, stats,
        )
    }
}

/// Visits all `size`-subsets of `0..n` in lexicographic order.
fn for_combinations(n: usize, size: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(n: usize, start: usize, left: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if left == 0 {
            f(acc);
            return;
        }
        for i in start..=n.saturating_sub(left) {
            acc.push(i);
            go(n, i + 1, left - 1, acc, f);
            acc.pop();
        }
    }
    if size > n {
        return;
    }
    let mut acc = Vec::with_capacity(size);
    go(n, 0, size, &mut acc, f);
}

/// One support attempt. With `exact`, every support transition must be used
/// ≥ 1 and the support must be connected from `initial`; otherwise counts are
/// free (≥ 0) and connectivity of the solution is checked and repaired after
/// the fact.
#[allow(clippy::too_many_arguments)]
fn try_support(
    ts: &TransitionSystem,
    initial: usize,
    final_state: usize,
    alphabet_len: usize,
    support: &[(usize, Symbol, usize)],
    extra_var_count: usize,
    extra_atoms: &[NormAtom],
    exact: bool,
    stats: &mut SolveStats,
) -> Option<(Vec<Symbol>, Vec<u64>)> {
    if exact {
        // Every support transition reachable from initial inside the support.
        if support.is_empty() {
            if initial != final_state {
                return None;
            }
        } else {
            let mut reach = std::collections::BTreeSet::new();
            reach.insert(initial);
            loop {
                let mut grew = false;
                for &(p, _, q) in support {
                    if reach.contains(&p) && reach.insert(q) {
                        grew = true;
                    }
                }
                if !grew {
                    break;
                }
            }
            if !support.iter().all(|&(p, _, _)| reach.contains(&p)) {
                return None;
            }
        }
    }

    let e = support.len();
    // Variables: [edge counts][x per symbol][extras].
    let var_count = e + alphabet_len + extra_var_count;
    let mut atoms: Vec<NormAtom> = Vec::new();
    if exact {
        for t in 0..e {
            atoms.push(NormAtom::geq_const(vec![t], 1));
        }
    }
    // Flow conservation: out(q) + [q = final] = in(q) + [q = initial].
    let mut states: std::collections::BTreeSet<usize> = [initial, final_state].into();
    for &(p, _, q) in support {
        states.insert(p);
        states.insert(q);
    }
    for &q in &states {
        let outs: Vec<usize> =
            (0..e).filter(|&t| support[t].0 == q).collect();
        let ins: Vec<usize> = (0..e).filter(|&t| support[t].2 == q).collect();
        let lhs_c = u64::from(q == final_state);
        let rhs_c = u64::from(q == initial);
        atoms.push(NormAtom { lhs: outs.clone(), lhs_c, rhs: ins.clone(), rhs_c });
        atoms.push(NormAtom { lhs: ins, lhs_c: rhs_c, rhs: outs, rhs_c: lhs_c });
    }
    // x_a = sum of a-labeled edge counts.
    for a in 0..alphabet_len {
        let edges: Vec<usize> =
            (0..e).filter(|&t| support[t].1.index() == a).collect();
        let [le, ge] = NormAtom::eq_pair(vec![e + a], edges);
        atoms.push(le);
        atoms.push(ge);
    }
    for at in extra_atoms {
        atoms.push(at.shift_vars(e));
    }

    let sol = solve_system(&atoms, var_count, None, &mut stats.ilp_nodes)?;
    let counts: Vec<u64> = sol[..e].to_vec();
    let extras: Vec<u64> = sol[e + alphabet_len..].to_vec();

    if !exact {
        // Drop unused edges; the used sub-multigraph must be connected from
        // initial for an Euler path to exist.
        let used: Vec<usize> = (0..e).filter(|&t| counts[t] > 0).collect();
        let mut reach = std::collections::BTreeSet::new();
        reach.insert(initial);
        loop {
            let mut grew = false;
            for &t in &used {
                if reach.contains(&support[t].0) && reach.insert(support[t].2) {
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        if !used.iter().all(|&t| reach.contains(&support[t].0)) {
            // Disconnected flow solution: retry exactly on the used skeleton,
            // which is small in practice.
            let skeleton: Vec<(usize, Symbol, usize)> =
                used.iter().map(|&t| support[t]).collect();
            if skeleton.len() <= 18 {
                let sub = TransitionSystem::new(
                    ts.alphabet.clone(),
                    ts.state_count(),
                    skeleton.iter().copied(),
                );
                let mut sub_stats = SolveStats::default();
                let opts = FlowOptions { support_cap: 18, max_support: None };
                let res = solve_flow(
                    &sub, initial, final_state, extra_var_count, extra_atoms, opts,
                    &mut sub_stats,
                );
                stats.supports_tried += sub_stats.supports_tried;
                stats.ilp_nodes += sub_stats.ilp_nodes;
                return res;
            }
            return None;
        }
    }

    let word = euler_path(support, &counts, initial, final_state)?;
    Some((word, extras))
}

/// Deterministic Hierholzer Euler-path extraction over edge multiplicities.
/// At each state the smallest (symbol, target, index) remaining edge is
/// taken first.
pub(crate) fn euler_path(
    support: &[(usize, Symbol, usize)],
    counts: &[u64],
    start: usize,
    end: usize,
) -> Option<Vec<Symbol>> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return if start == end { Some(Vec::new()) } else { None };
    }
    // Edge order per state.
    let mut remaining: Vec<u64> = counts.to_vec();
    let mut by_state: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (t, &(p, _, _)) in support.iter().enumerate() {
        by_state.entry(p).or_default().push(t);
    }
    for edges in by_state.values_mut() {
        edges.sort_by_key(|&t| (support[t].1, support[t].2, t));
    }
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut trail: Vec<usize> = Vec::new();
    while let Some(&(v, _)) = stack.last() {
        let next = by_state
            .get(&v)
            .and_then(|edges| edges.iter().copied().find(|&t| remaining[t] > 0));
        match next {
            Some(t) => {
                remaining[t] -= 1;
                stack.push((support[t].2, Some(t)));
            }
            None => {
                let (_, e) = stack.pop().unwrap();
                if let Some(t) = e {
                    trail.push(t);
                }
            }
        }
    }
    if remaining.iter().any(|&c| c > 0) {
        return None;
    }
    trail.reverse();
    // Validate endpoints.
    if support[trail[0]].0 != start || support[*trail.last().unwrap()].2 != end {
        return None;
    }
    Some(trail.into_iter().map(|t| support[t].1).collect())
}

/// Returns a word `w ∈ L(nfa)` with `formula(Parikh(w))`, or `None` iff the
/// Presburger automaton's language is empty. Multiple final states are
/// handled by one query per final state.
pub fn parikh_feasible(pa: &PresburgerAutomaton) -> Option<Vec<Symbol>> {
    let mut stats = SolveStats::default();
    parikh_feasible_with(pa, FlowOptions::default(), &mut stats)
}

pub(crate) fn parikh_feasible_with(
    pa: &PresburgerAutomaton,
    options: FlowOptions,
    stats: &mut SolveStats,
) -> Option<Vec<Symbol>> {
    let branches = to_dnf(&pa.formula.matrix);
    for &f in &pa.nfa.finals {
        for branch in &branches {
            stats.branches_tried += 1;
            if let Some((word, _)) = solve_flow(
                &pa.nfa.ts,
                pa.nfa.initial,
                f,
                pa.formula.bound_count,
                branch,
                options,
                stats,
            ) {
                debug_assert!(nfa_run_exists(&pa.nfa, &word));
                return Some(word);
            }
        }
    }
    None
}

/// Independent oracle: the shortest accepted word of length ≤ `max_len`
/// satisfying the formula (lexicographically least among shortest), or
/// `None`.
pub fn brute_force_oracle(pa: &PresburgerAutomaton, max_len: usize) -> Option<Vec<Symbol>> {
    let k = pa.nfa.ts.alphabet.len();
    let mut layer: Vec<Vec<Symbol>> = vec![Vec::new()];
    for _len in 0..=max_len {
        for w in &layer {
            if nfa_run_exists(&pa.nfa, w) {
                let pv = ParikhVector::of_word(k, w);
                if formula_sat_existential(&pa.formula, &pv) {
                    return Some(w.clone());
                }
            }
        }
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..k as u32 {
                let mut w2 = w.clone();
                w2.push(Symbol(a));
                next.push(w2);
            }
        }
        layer = next;
    }
    None
}

/// `∃ z̄ ψ(x̄, z̄)` for a fixed Parikh vector: solved with the feasibility
/// core, branch by branch.
pub fn formula_sat_existential(f: &EPFormula, assignment: &ParikhVector) -> bool {
    let branches = to_dnf(&f.matrix);
    for branch in branches {
        // Fix the free variables to the Parikh values, leave bound ones free.
        let mut atoms: Vec<NormAtom> = branch;
        for (v, &c) in assignment.counts.iter().enumerate() {
            atoms.push(NormAtom::leq_const(vec![v], c));
            atoms.push(NormAtom::geq_const(vec![v], c));
        }
        let mut nodes = 0;
        if solve_system(&atoms, f.free_count + f.bound_count, None, &mut nodes).is_some() {
            return true;
        }
    }
    false
}
