//! Region-scan properties at full resolution.

use phaseless::matrix::NonnegMatrix;
use phaseless::rank::{decide_by_submatrices, decide_nonmaximal};
use phaseless::rational::int;
use phaseless::scan::{classify, render_svg, run_scan, CellVerdict, FamilyPoint, Method, ScanConfig, ScanFamily};

#[test]
fn slice5_inner_set_strictly_inside_nonmaximal_set() {
    let grid = run_scan(&ScanConfig::new(ScanFamily::Slice5, 101, Method::Lp)).unwrap();
    let inner = grid.count(CellVerdict::InnerDeterminant);
    let between = grid.count(CellVerdict::Nonmaximal);
    assert!(inner > 0 && between > 0, "inner {inner}, between {between}");
    assert!(grid.count(CellVerdict::OutsideCone) > 0 && grid.count(CellVerdict::Maximal) > 0);
    assert_eq!(grid.count(CellVerdict::BoundaryUncertain), 0);
    // The 5×5 example sits at (0, 1), between the two sets.
    let (i, j) = (25, 75);
    assert_eq!((grid.s(i), grid.t(j)), (int(0), int(1)));
    assert_eq!(grid.cell(i, j), CellVerdict::Nonmaximal);
    assert_eq!(render_svg(&grid), render_svg(&grid.clone()));
}

#[test]
fn param3x4_is_the_intersection_of_its_blocks() {
    let family = ScanFamily::Param3x4;
    let grid = run_scan(&ScanConfig::new(family.clone(), 201, Method::Lp)).unwrap();
    let semialg = run_scan(&ScanConfig::new(family.clone(), 201, Method::Semialg)).unwrap();
    assert_eq!(grid.cells, semialg.cells);
    // Spot-check the block reduction on a coarser subgrid.
    for j in (0..201).step_by(10) {
        for i in (0..201).step_by(10) {
            if let FamilyPoint::Exact(a) = family.evaluate(&grid.s(i), &grid.t(j)).unwrap() {
                let blocks = decide_by_submatrices(&a).unwrap();
                assert_eq!(blocks, grid.cell(i, j).is_nonmaximal(), "({i}, {j})");
            } else {
                assert_eq!(grid.cell(i, j), CellVerdict::OutsideCone);
            }
        }
    }
}

#[test]
fn circulant_cells_match_direct_decisions() {
    let family = ScanFamily::Circulant3;
    for (s, t) in [(int(2), int(2)), (int(0), int(0)), (int(2), int(1)), (int(3), int(1))] {
        let direct = match family.evaluate(&s, &t).unwrap() {
            FamilyPoint::Exact(a) => decide_nonmaximal(&a).unwrap().is_nonmaximal(),
            other => panic!("{other:?}"),
        };
        assert_eq!(classify(&family, &s, &t, Method::Lp).unwrap().is_nonmaximal(), direct);
    }
    let j3 = NonnegMatrix::ones(3, 3);
    assert!(decide_nonmaximal(&j3).unwrap().is_nonmaximal());
}
