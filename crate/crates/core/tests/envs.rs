use std::collections::HashMap;

use ltl_tasks::envs::{
    locked_rooms, reachable_states, Action, Direction, EnvConfig, EnvState, Lock, GRID,
};
use ltl_tasks::rng::stream;
use ltl_tasks::{Proposition, Vocabulary};

#[test]
fn letter_layouts_place_each_letter_twice_off_center() {
    let config = EnvConfig::letter_world(None);
    for i in 0..200 {
        let s = config.reset(&mut stream(3, i)).unwrap();
        let layout = EnvConfig::layout_of(&s).unwrap();
        let mut seen: HashMap<String, usize> = HashMap::new();
        for r in 0..GRID {
            for c in 0..GRID {
                if let Some(p) = layout.letter_at(r, c) {
                    *seen.entry(p.to_string()).or_default() += 1;
                }
            }
        }
        assert!(layout.letter_at(3, 3).is_none());
        assert_eq!(seen.len(), 12);
        assert!(seen.values().all(|&n| n == 2));
        assert_eq!(s.cell(), Some((3, 3)));
    }
}

#[test]
fn placement_seed_fixes_the_layout() {
    let config = EnvConfig::letter_world(Some(7));
    let a = config.reset(&mut stream(1, 0)).unwrap();
    let b = config.reset(&mut stream(2, 9)).unwrap();
    assert_eq!(a, b);
    let other = EnvConfig::letter_world(Some(8))
        .fixed_initial_state()
        .unwrap();
    assert_ne!(EnvConfig::layout_of(&a), EnvConfig::layout_of(&other));
    assert!(EnvConfig::letter_world(None).fixed_initial_state().is_err());
}

#[test]
fn letter_world_moves_are_clamped_to_the_grid() {
    let config = EnvConfig::letter_world(Some(1));
    let mut s = config.fixed_initial_state().unwrap();
    for _ in 0..10 {
        s = config.step(&s, &Action::Move(Direction::North)).unwrap();
    }
    assert_eq!(s.cell(), Some((0, 3)));
    for _ in 0..10 {
        s = config.step(&s, &Action::Move(Direction::West)).unwrap();
    }
    assert_eq!(s.cell(), Some((0, 0)));
    let label = config.label(&s, &Action::Move(Direction::North)).unwrap();
    assert_eq!(label, config.label_of(&s));
}

fn walk(config: &EnvConfig, moves: &[Direction]) -> EnvState {
    let mut s = config.fixed_initial_state().unwrap();
    for &d in moves {
        s = config.step(&s, &Action::Move(d)).unwrap();
    }
    s
}

#[test]
fn locked_rooms_lock_behind_the_agent() {
    use Direction::*;
    let config = EnvConfig::locked_rooms();
    let s = walk(&config, &[West, West, West]);
    assert_eq!(
        s,
        EnvState::LockedRooms {
            row: 1,
            col: 2,
            lock: Lock::LockedA
        }
    );
    // the door no longer opens from inside
    let back = walk(&config, &[West, West, West, East, East]);
    assert_eq!(back, s);
    // standing in the doorway does not lock
    let door = walk(&config, &[East, East]);
    assert_eq!(door.cell(), Some(locked_rooms::DOOR_B));
    assert_eq!(walk(&config, &[East, East, West]).cell(), Some((1, 6)));
    // walls block
    assert_eq!(walk(&config, &[North]).cell(), Some(locked_rooms::START));
}

#[test]
fn locked_room_confines_the_reachable_colors() {
    let config = EnvConfig::locked_rooms();
    let states = reachable_states(&config).unwrap();
    let open = states.iter().filter(|s| {
        matches!(
            s,
            EnvState::LockedRooms {
                lock: Lock::None,
                ..
            }
        )
    });
    assert_eq!(open.count(), 5, "corridor cells between the doors");
    for s in &states {
        let EnvState::LockedRooms { col, lock, .. } = *s else {
            unreachable!()
        };
        match lock {
            Lock::LockedA => assert!(col < locked_rooms::DOOR_A.1),
            Lock::LockedB => assert!(col > locked_rooms::DOOR_B.1),
            Lock::None => assert!((locked_rooms::DOOR_A.1..=locked_rooms::DOOR_B.1).contains(&col)),
        }
        let color = config.label_of(s);
        if lock == Lock::LockedA {
            assert!(!color.contains(&Proposition::new("G").unwrap()));
        }
    }
}

#[test]
fn bootcamp_emits_exactly_one_proposition() {
    let vocab = Vocabulary::letters(4);
    let config = EnvConfig::bootcamp(vocab.clone());
    assert_eq!(config.actions().len(), 4);
    assert!(config.label_alphabet().iter().all(|l| l.len() == 1));
    let s = config.fixed_initial_state().unwrap();
    for a in config.actions() {
        let (next, label) = config.transition(&s, &a).unwrap();
        assert_eq!(next, EnvState::Bootcamp);
        let Action::Emit(p) = &a else { unreachable!() };
        assert!(label.contains(p));
    }
    let outside = Action::Emit(Proposition::new("z").unwrap());
    assert!(config.step(&s, &outside).is_err());
    assert!(config.step(&s, &Action::Move(Direction::North)).is_err());
}

#[test]
fn config_round_trips_through_json() {
    for config in [
        EnvConfig::letter_world(Some(4)),
        EnvConfig::locked_rooms(),
        EnvConfig::bootcamp(Vocabulary::letters(3)),
    ] {
        let text = serde_json::to_string(&config).unwrap();
        let back: EnvConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, config);
    }
}
