use std::collections::VecDeque;

use super::FacePoset;

/// Lazy backtracking enumeration of poset isomorphisms. Yields maps from
/// face indices of the first poset to face indices of the second, in a fixed
/// order determined by the inputs alone.
pub struct PosetIsomorphisms<'a> {
    p1: &'a FacePoset,
    p2: &'a FacePoset,
    order: Vec<usize>,
    stack: Vec<(Vec<usize>, usize)>,
    assign: Vec<Option<usize>>,
    used: Vec<bool>,
    started: bool,
    done: bool,
}

impl<'a> PosetIsomorphisms<'a> {
    pub(super) fn new(p1: &'a FacePoset, p2: &'a FacePoset) -> Self {
        let mut sig1: Vec<_> = (0..p1.len()).map(|i| p1.signature(i)).collect();
        let mut sig2: Vec<_> = (0..p2.len()).map(|i| p2.signature(i)).collect();
        sig1.sort_unstable();
        sig2.sort_unstable();
        let compatible = sig1 == sig2 && p1.covers().len() == p2.covers().len();
        Self {
            p1,
            p2,
            order: traversal_order(p1),
            stack: Vec::new(),
            assign: vec![None; p1.len()],
            used: vec![false; p2.len()],
            started: false,
            done: !compatible,
        }
    }

    fn candidates(&self, f: usize) -> Vec<usize> {
        let sig = self.p1.signature(f);
        let anchor = self.p1.upper_covers(f).iter().map(|&g| (g, true))
            .chain(self.p1.lower_covers(f).iter().map(|&g| (g, false)))
            .find_map(|(g, g_above)| self.assign[g].map(|img| (img, g_above)));
        let pool: Vec<usize> = match anchor {
            // f sits below g, so the image sits below g's image.
            Some((img, true)) => self.p2.lower_covers(img).to_vec(),
            Some((img, false)) => self.p2.upper_covers(img).to_vec(),
            None => (0..self.p2.len()).collect(),
        };
        pool.into_iter().filter(|&c| !self.used[c] && self.p2.signature(c) == sig).collect()
    }

    fn consistent(&self, f: usize, c: usize) -> bool {
        let up_ok = self.p1.upper_covers(f).iter().all(|&g| {
            self.assign[g].is_none_or(|img| self.p2.upper_covers(c).contains(&img))
        });
        let down_ok = self.p1.lower_covers(f).iter().all(|&g| {
            self.assign[g].is_none_or(|img| self.p2.lower_covers(c).contains(&img))
        });
        // Reverse direction: no relation on the image side without a preimage.
        let rev_up = self.p2.upper_covers(c).iter().all(|&h| {
            self.preimage(h).is_none_or(|g| self.p1.upper_covers(f).contains(&g))
        });
        let rev_down = self.p2.lower_covers(c).iter().all(|&h| {
            self.preimage(h).is_none_or(|g| self.p1.lower_covers(f).contains(&g))
        });
        up_ok && down_ok && rev_up && rev_down
    }

    fn preimage(&self, h: usize) -> Option<usize> {
        if !self.used[h] {
            return None;
        }
        self.assign.iter().position(|a| *a == Some(h))
    }
}

impl Iterator for PosetIsomorphisms<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.order.is_empty() {
                self.done = true;
                return Some(Vec::new());
            }
            let c = self.candidates(self.order[0]);
            self.stack.push((c, 0));
        }
        loop {
            let level = self.stack.len() - 1;
            let f = self.order[level];
            if let Some(prev) = self.assign[f].take() {
                self.used[prev] = false;
            }
            let (cands, idx) = self.stack.last_mut().expect("non-empty stack");
            if *idx >= cands.len() {
                self.stack.pop();
                if self.stack.is_empty() {
                    self.done = true;
                    return None;
                }
                continue;
            }
            let c = cands[*idx];
            *idx += 1;
            if !self.consistent(f, c) {
                continue;
            }
            self.assign[f] = Some(c);
            self.used[c] = true;
            if level + 1 == self.order.len() {
                return Some(self.assign.iter().map(|a| a.expect("complete assignment")).collect());
            }
            let next = self.candidates(self.order[level + 1]);
            self.stack.push((next, 0));
        }
    }
}

/// Breadth-first order over the Hasse diagram, component by component, so
/// every face after the first in a component has an assigned neighbour.
fn traversal_order(p: &FacePoset) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut order = Vec::with_capacity(p.len());
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &y in p.upper_covers(x).iter().chain(p.lower_covers(x)) {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    order
}
