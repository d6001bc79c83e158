use super::HarnessError;

/// Training meta-parameters for one loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScheduleEntry {
    pub loop_index: usize,
    pub depth: usize,
    pub trees: usize,
    pub bits: u32,
}

pub const DEFAULT_BITS: u32 = 15;

pub const SCHEDULE_NAMES: [&str; 11] = [
    "fives", "nines", "thirteens", "sixteens", "inc", "32_inc", "inc2", "inc3", "dec3", "exp2", "exp5",
];

const INC2: [(usize, usize); 16] = [
    (3, 150),
    (5, 150),
    (7, 150),
    (9, 100),
    (11, 100),
    (13, 100),
    (15, 75),
    (17, 50),
    (19, 75),
    (21, 100),
    (23, 150),
    (25, 75),
    (27, 100),
    (29, 150),
    (31, 75),
    (33, 100),
];

const EXP2: [(usize, usize); 22] = [
    (4, 50),
    (5, 150),
    (6, 160),
    (7, 170),
    (8, 180),
    (9, 190),
    (10, 200),
    (11, 200),
    (12, 200),
    (13, 200),
    (14, 210),
    (15, 220),
    (16, 225),
    (16, 225),
    (32, 225),
    (9, 300),
    (16, 300),
    (32, 225),
    (64, 150),
    (24, 250),
    (25, 250),
    (32, 250),
];

const EXP2_BITS: u32 = 16;

/// (depth, trees, feature bits). The table lists bucket counts; the fourth
/// and sixth columns print as "28", read here as 2^8.
const EXP5: [(usize, usize, u32); 12] = [
    (512, 2, 14),
    (512, 2, 13),
    (32, 100, 12),
    (1000, 100, 8),
    (32, 200, 12),
    (1000, 100, 8),
    (32, 200, 12),
    (1000, 32, 5),
    (32, 300, 11),
    (1000, 32, 6),
    (1000, 32, 5),
    (100, 32, 7),
];

/// Linear ramp over 16 loops rounded to the nearest multiple of 10; loops
/// past the sixteenth keep the final value.
fn ramp(from: usize, to: usize, k: usize) -> usize {
    let k = k.min(15) as f64;
    let t = from as f64 + (to as f64 - from as f64) * k / 15.0;
    ((t / 10.0).round() * 10.0) as usize
}

fn inc_depth(k: usize) -> usize {
    (3 + 2 * k).min(33)
}

pub fn builtin_schedule(name: &str, loops: usize) -> Result<Vec<ScheduleEntry>, HarnessError> {
    let table_len = match name {
        "inc2" => Some(INC2.len()),
        "exp2" => Some(EXP2.len()),
        "exp5" => Some(EXP5.len()),
        _ => None,
    };
    if !SCHEDULE_NAMES.contains(&name) {
        return Err(HarnessError::UnknownSchedule(name.to_string()));
    }
    if let Some(len) = table_len {
        if loops > len {
            return Err(HarnessError::ScheduleTooShort {
                name: name.to_string(),
                entries: len,
                requested: loops,
            });
        }
    }
    Ok((0..loops)
        .map(|k| {
            let (depth, trees, bits) = match name {
                "fives" => (5, 100, DEFAULT_BITS),
                "nines" => (9, 100, DEFAULT_BITS),
                "thirteens" => (13, 200, DEFAULT_BITS),
                "sixteens" => (16, 100, DEFAULT_BITS),
                "inc" => (inc_depth(k), 100, DEFAULT_BITS),
                "32_inc" => (32, ramp(50, 250, k), DEFAULT_BITS),
                "inc3" => (inc_depth(k), ramp(50, 250, k), DEFAULT_BITS),
                "dec3" => (inc_depth(k), ramp(250, 50, k), DEFAULT_BITS),
                "inc2" => (INC2[k].0, INC2[k].1, DEFAULT_BITS),
                "exp2" => (EXP2[k].0, EXP2[k].1, EXP2_BITS),
                "exp5" => EXP5[k],
                _ => unreachable!("name checked above"),
            };
            ScheduleEntry {
                loop_index: k,
                depth,
                trees,
                bits,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dt(name: &str, loops: usize) -> Vec<(usize, usize)> {
        builtin_schedule(name, loops).unwrap().iter().map(|e| (e.depth, e.trees)).collect()
    }

    #[test]
    fn fixed_schedules_repeat() {
        assert_eq!(dt("fives", 3), vec![(5, 100); 3]);
        assert_eq!(dt("nines", 2), vec![(9, 100); 2]);
        assert_eq!(dt("thirteens", 20).last(), Some(&(13, 200)));
        assert_eq!(dt("sixteens", 1), vec![(16, 100)]);
    }

    #[test]
    fn ramps() {
        let t: Vec<usize> = dt("32_inc", 16).iter().map(|e| e.1).collect();
        assert_eq!(t, vec![50, 60, 80, 90, 100, 120, 130, 140, 160, 170, 180, 200, 210, 220, 240, 250]);
        let d: Vec<usize> = dt("inc3", 18).iter().map(|e| e.0).collect();
        assert_eq!(&d[..3], &[3, 5, 7]);
        assert_eq!(&d[15..], &[33, 33, 33]);
        let dec: Vec<usize> = dt("dec3", 16).iter().map(|e| e.1).collect();
        assert_eq!(dec[0], 250);
        assert_eq!(dec[15], 50);
        assert!(dec.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn loop_indices_are_contiguous() {
        for name in SCHEDULE_NAMES {
            let s = builtin_schedule(name, 12).unwrap();
            assert!(s.iter().enumerate().all(|(i, e)| e.loop_index == i));
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(builtin_schedule("sevens", 1), Err(HarnessError::UnknownSchedule(_))));
        let err = builtin_schedule("inc2", 20).unwrap_err();
        assert_eq!(err.to_string(), "schedule inc2 has 16 entries, 20 loops requested");
        assert!(builtin_schedule("exp2", 22).is_ok());
        assert!(builtin_schedule("exp5", 13).is_err());
    }
}
