//! Complete backtracking search for 101-colorings with unit propagation.

use serde::{Deserialize, Serialize};

use super::instance::{Color, ColoringInstance, Coloring};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ColoringOutcome {
    Colorable { coloring: Coloring, nodes: u64 },
    Uncolorable { nodes: u64 },
}

impl ColoringOutcome {
    pub fn is_colorable(&self) -> bool {
        matches!(self, ColoringOutcome::Colorable { .. })
    }

    pub fn nodes(&self) -> u64 {
        match self {
            ColoringOutcome::Colorable { nodes, .. } | ColoringOutcome::Uncolorable { nodes } => *nodes,
        }
    }
}

struct Solver<'a> {
    inst: &'a ColoringInstance,
    /// Triad indices containing each ray.
    triads_of: Vec<Vec<usize>>,
    colors: Vec<Option<Color>>,
    trail: Vec<usize>,
    queue: Vec<usize>,
    nodes: u64,
}

impl<'a> Solver<'a> {
    fn new(inst: &'a ColoringInstance) -> Self {
        let n = inst.rays().len();
        let mut triads_of = vec![Vec::new(); n];
        for (t, tri) in inst.triads().iter().enumerate() {
            for &i in tri {
                triads_of[i].push(t);
            }
        }
        Solver { inst, triads_of, colors: vec![None; n], trail: Vec::new(), queue: Vec::new(), nodes: 0 }
    }

    /// Records `color` for `i`; `false` on a clash with an earlier value.
    fn set(&mut self, i: usize, color: Color) -> bool {
        match self.colors[i] {
            Some(c) => c == color,
            None => {
                self.colors[i] = Some(color);
                self.trail.push(i);
                self.queue.push(i);
                true
            }
        }
    }

    fn propagate(&mut self) -> bool {
        while let Some(i) = self.queue.pop() {
            if self.colors[i] == Some(Color::Blue) {
                for k in 0..self.inst.neighbors(i).len() {
                    let j = self.inst.neighbors(i)[k];
                    if !self.set(j, Color::Red) {
                        return false;
                    }
                }
            }
            for k in 0..self.triads_of[i].len() {
                let tri = self.inst.triads()[self.triads_of[i][k]];
                let mut blues = 0;
                let mut free = None;
                let mut n_free = 0;
                for &r in &tri {
                    match self.colors[r] {
                        Some(Color::Blue) => blues += 1,
                        Some(Color::Red) => {}
                        None => {
                            n_free += 1;
                            free = Some(r);
                        }
                    }
                }
                match (blues, n_free) {
                    (b, _) if b > 1 => return false,
                    (0, 0) => return false,
                    (0, 1) => {
                        if !self.set(free.expect("one free ray"), Color::Blue) {
                            return false;
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        for i in self.trail.drain(mark..) {
            self.colors[i] = None;
        }
        self.queue.clear();
    }

    /// Most-constrained unassigned ray: most triads still lacking a blue,
    /// then most orthogonal neighbours, then lowest index.
    fn pick(&self) -> Option<usize> {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, c) in self.colors.iter().enumerate() {
            if c.is_some() {
                continue;
            }
            let open = self.triads_of[i]
                .iter()
                .filter(|&&t| self.inst.triads()[t].iter().all(|&r| self.colors[r] != Some(Color::Blue)))
                .count();
            let deg = self.inst.neighbors(i).len();
            if best.is_none_or(|(_, o, d)| (open, deg) > (o, d)) {
                best = Some((i, open, deg));
            }
        }
        best.map(|(i, _, _)| i)
    }

    fn solve(&mut self) -> bool {
        self.nodes += 1;
        let Some(i) = self.pick() else {
            return true;
        };
        for color in [Color::Blue, Color::Red] {
            let mark = self.trail.len();
            if self.set(i, color) && self.propagate() && self.solve() {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

/// Decides colorability of `inst`, optionally with some ray colors fixed.
pub fn search_coloring_pinned(inst: &ColoringInstance, pins: &[(usize, Color)]) -> ColoringOutcome {
    let mut s = Solver::new(inst);
    let mut ok = true;
    for &(i, c) in pins {
        ok &= s.set(i, c);
    }
    if ok && s.propagate() && s.solve() {
        let coloring = Coloring(s.colors.iter().map(|c| c.expect("complete assignment")).collect());
        debug_assert!(coloring.is_valid(inst));
        ColoringOutcome::Colorable { coloring, nodes: s.nodes }
    } else {
        ColoringOutcome::Uncolorable { nodes: s.nodes }
    }
}

pub fn search_coloring(inst: &ColoringInstance) -> ColoringOutcome {
    search_coloring_pinned(inst, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ks::instance::DEFAULT_TOLERANCE;
    use crate::ks::ray::Ray;

    fn inst(rays: &[[i64; 3]]) -> ColoringInstance {
        let rays: Vec<Ray> = rays.iter().map(|c| Ray::exact_ints(c.map(|x| (x, 0))).unwrap()).collect();
        ColoringInstance::build(&rays, DEFAULT_TOLERANCE).unwrap()
    }

    #[test]
    fn single_triad() {
        let i = inst(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let ColoringOutcome::Colorable { coloring, .. } = search_coloring(&i) else { panic!() };
        assert!(coloring.is_valid(&i));
        assert_eq!(coloring.0.iter().filter(|&&c| c == Color::Blue).count(), 1);
    }

    #[test]
    fn pins_respected_or_refuted() {
        let i = inst(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let out = search_coloring_pinned(&i, &[(2, Color::Blue)]);
        let ColoringOutcome::Colorable { coloring, .. } = out else { panic!() };
        assert_eq!(coloring.0, vec![Color::Red, Color::Red, Color::Blue]);
        assert!(!search_coloring_pinned(&i, &[(0, Color::Red), (1, Color::Red), (2, Color::Red)]).is_colorable());
        assert!(!search_coloring_pinned(&i, &[(0, Color::Blue), (0, Color::Red)]).is_colorable());
        assert!(!search_coloring_pinned(&i, &[(0, Color::Blue), (1, Color::Blue)]).is_colorable());
    }

    #[test]
    fn orthogonal_pair_never_double_blue() {
        let i = inst(&[[1, 0, 0], [0, 1, 0]]);
        assert!(!search_coloring_pinned(&i, &[(0, Color::Blue), (1, Color::Blue)]).is_colorable());
        assert!(search_coloring(&i).is_colorable());
    }
}
