//! A small DPLL solver: unit propagation, chronological backtracking,
//! branching on the first unassigned variable of the shortest open clause.

/// CNF over variables `1..=num_vars`; a literal is `±v`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SatInstance {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl SatInstance {
    pub fn new() -> SatInstance {
        SatInstance::default()
    }

    /// Allocates a fresh variable.
    pub fn var(&mut self) -> i32 {
        self.num_vars += 1;
        self.num_vars as i32
    }

    pub fn add(&mut self, clause: Vec<i32>) {
        for &l in &clause {
            assert!(
                l != 0 && l.unsigned_abs() as usize <= self.num_vars,
                "literal {l} out of range"
            );
        }
        self.clauses.push(clause);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    /// `model[v]` is the value of variable `v`; index 0 is unused.
    Sat(Vec<bool>),
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Val {
    Unset,
    True,
    False,
}

struct Solver<'a> {
    clauses: &'a [Vec<i32>],
    assign: Vec<Val>,
    trail: Vec<i32>,
}

impl Solver<'_> {
    fn value(&self, lit: i32) -> Val {
        match self.assign[lit.unsigned_abs() as usize] {
            Val::Unset => Val::Unset,
            v if (v == Val::True) == (lit > 0) => Val::True,
            _ => Val::False,
        }
    }

    fn set(&mut self, lit: i32) {
        self.assign[lit.unsigned_abs() as usize] = if lit > 0 { Val::True } else { Val::False };
        self.trail.push(lit);
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let l = self.trail.pop().expect("trail");
            self.assign[l.unsigned_abs() as usize] = Val::Unset;
        }
    }

    /// Propagates units to a fixpoint. Returns false on conflict.
    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for c in self.clauses {
                let mut open = None;
                let mut n_open = 0;
                let mut sat = false;
                for &l in c {
                    match self.value(l) {
                        Val::True => {
                            sat = true;
                            break;
                        }
                        Val::Unset => {
                            n_open += 1;
                            open = Some(l);
                        }
                        Val::False => {}
                    }
                }
                if sat {
                    continue;
                }
                match n_open {
                    0 => return false,
                    1 => {
                        self.set(open.expect("open literal"));
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn pick(&self) -> Option<i32> {
        self.clauses
            .iter()
            .filter(|c| !c.iter().any(|&l| self.value(l) == Val::True))
            .min_by_key(|c| c.iter().filter(|&&l| self.value(l) == Val::Unset).count())
            .and_then(|c| c.iter().copied().find(|&l| self.value(l) == Val::Unset))
    }

    fn solve(&mut self) -> bool {
        if !self.propagate() {
            return false;
        }
        let Some(lit) = self.pick() else {
            return true;
        };
        let mark = self.trail.len();
        for choice in [lit, -lit] {
            self.set(choice);
            if self.solve() {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

pub fn sat_solve(inst: &SatInstance) -> SatResult {
    if inst.clauses.iter().any(Vec::is_empty) {
        return SatResult::Unsat;
    }
    let mut s = Solver {
        clauses: &inst.clauses,
        assign: vec![Val::Unset; inst.num_vars + 1],
        trail: Vec::new(),
    };
    if s.solve() {
        // unconstrained variables default to false
        SatResult::Sat(s.assign.iter().map(|v| *v == Val::True).collect())
    } else {
        SatResult::Unsat
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: usize, cs: &[&[i32]]) -> SatInstance {
        SatInstance {
            num_vars: n,
            clauses: cs.iter().map(|c| c.to_vec()).collect(),
        }
    }

    fn satisfies(model: &[bool], cs: &[Vec<i32>]) -> bool {
        cs.iter()
            .all(|c| c.iter().any(|&l| model[l.unsigned_abs() as usize] == (l > 0)))
    }

    #[test]
    fn contradiction() {
        assert_eq!(sat_solve(&inst(1, &[&[1], &[-1]])), SatResult::Unsat);
    }

    #[test]
    fn unique_model() {
        let i = inst(2, &[&[1, 2], &[-1, 2], &[1, -2]]);
        assert_eq!(sat_solve(&i), SatResult::Sat(vec![false, true, true]));
    }

    #[test]
    fn empty_instance() {
        assert_eq!(sat_solve(&SatInstance::new()), SatResult::Sat(vec![false]));
    }

    #[test]
    fn empty_clause_is_unsat() {
        assert_eq!(sat_solve(&inst(1, &[&[]])), SatResult::Unsat);
    }

    #[test]
    fn pigeonhole_three_into_two() {
        // p(i,j): pigeon i in hole j, var 2*i + j + 1
        let v = |i: i32, j: i32| 2 * i + j + 1;
        let mut cs: Vec<Vec<i32>> = (0..3).map(|i| vec![v(i, 0), v(i, 1)]).collect();
        for j in 0..2 {
            for a in 0..3 {
                for b in a + 1..3 {
                    cs.push(vec![-v(a, j), -v(b, j)]);
                }
            }
        }
        let i = SatInstance {
            num_vars: 6,
            clauses: cs,
        };
        assert_eq!(sat_solve(&i), SatResult::Unsat);
    }

    #[test]
    fn model_satisfies_instance() {
        let i = inst(4, &[&[1, -2], &[2, 3], &[-3, 4], &[-1, -4]]);
        match sat_solve(&i) {
            SatResult::Sat(m) => assert!(satisfies(&m, &i.clauses)),
            SatResult::Unsat => panic!("satisfiable instance"),
        }
    }
}
