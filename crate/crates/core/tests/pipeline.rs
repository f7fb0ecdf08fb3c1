use bdspectra::battery::{reductive_battery, standard_battery};
use bdspectra::bdcomplex::{
    assemble_cohomology, build_column, compute_e1, ColumnContext, KCohomologyReport, Model, Sheaf,
};
use bdspectra::classify::{assemble_bg, extension_report, BgReport, ExtensionKind};
use bdspectra::invariants::Restrict;
use bdspectra::rootdata::{count_nbdg_spec, GroupSpec};
use bdspectra::weyl::{admissible_tuples, canonical_tuple, WSets, WeylData};
use bdspectra::zchain::export::import_complex;
use bdspectra::zchain::{CohomologyGroup, FieldModel};

fn spec(s: &str) -> GroupSpec {
    s.parse().unwrap()
}

#[test]
fn components_independent_of_representative() {
    let specs: Vec<GroupSpec> = standard_battery()
        .into_iter()
        .filter(|s| s.derived_rank() <= 6)
        .collect();
    for s in &specs {
        let ctx = ColumnContext::new(s, Restrict::Derived);
        for level in 1..=3 {
            for t in admissible_tuples(ctx.cartan(), level) {
                let c = canonical_tuple(ctx.cartan(), &t).unwrap();
                if c == t {
                    continue;
                }
                for m in 0..=(4 - level) {
                    assert_eq!(
                        ctx.component(&t, m),
                        ctx.component(&c, m),
                        "{s} {t:?} m={m}"
                    );
                }
            }
        }
    }
}

#[test]
fn nbdg_count_matches_torsion() {
    for s in standard_battery().iter().chain(&reductive_battery()) {
        let e1 = compute_e1(&s.derived(), Sheaf::K3).cell(-3, 6);
        assert_eq!(
            e1,
            CohomologyGroup::new(0, &vec![2; count_nbdg_spec(s)]),
            "{s}"
        );
    }
}

#[test]
fn e8_is_not_of_type_a() {
    let e1 = compute_e1(&spec("E8"), Sheaf::K3);
    assert_eq!(e1.cell(-3, 6), CohomologyGroup::cyclic(2));
    assert!(e1.cell(-3, 5).is_zero());
    assert_eq!(e1.cell(-2, 3), CohomologyGroup::free(1));
}

#[test]
fn export_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let col = build_column(&spec("B3"), Sheaf::K3, -3).unwrap();
    let manifest = col.export(&spec("B3"), dir.path()).unwrap();
    assert_eq!(manifest.metadata["spec"], "B3");
    assert_eq!(manifest.metadata["p"], "-3");
    let (back, read) = import_complex(dir.path()).unwrap();
    assert_eq!(read, manifest);
    assert_eq!(back.ranks(), col.complex.ranks());
    assert_eq!(back.differentials(), col.complex.differentials());
    assert_eq!(back.cohomology(6), CohomologyGroup::cyclic(2));
}

#[test]
fn reports_round_trip_through_json() {
    let f5 = Model::Field(FieldModel::finite(5).unwrap());
    for (s, m) in [("A2xT1", &f5), ("G2", &Model::Symbolic), ("A1", &f5)] {
        for sheaf in [Sheaf::K2, Sheaf::K3] {
            let g = assemble_cohomology(&spec(s), sheaf, m);
            let back: KCohomologyReport =
                serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
            assert_eq!(back, g);
            let bg = assemble_bg(&spec(s), sheaf, m);
            let back: BgReport =
                serde_json::from_str(&serde_json::to_string(&bg).unwrap()).unwrap();
            assert_eq!(back, bg);
        }
    }
    let ext = extension_report(
        &spec("A3"),
        Sheaf::K3,
        ExtensionKind::Gerbal,
        &Model::Symbolic,
    );
    let json = serde_json::to_value(&ext).unwrap();
    assert_eq!(json["generators"]["degree"], "cubic");
    assert_eq!(json["generators"]["forms"].as_array().unwrap().len(), 1);
}

#[test]
fn weyl_data_round_trip() {
    let data = WeylData::compute(&spec("F4xA2"));
    let back: WeylData = serde_json::from_str(&serde_json::to_string(&data).unwrap()).unwrap();
    assert_eq!(back, data);
    let w = back.wsets();
    for t in w.level(2) {
        assert!(w.position(t).is_some());
    }
    let direct: WSets = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
    assert_eq!(direct.position(&w.level(3)[0]), Some(0));
}
