//! Action grammar for the three environments.
//!
//! Actions are structured values. Text only shows up when parsing policy
//! output and when rendering logs; two renderings that mean the same thing
//! normalize to the same `(verb, object, target)` tuple.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which environment an instance, observation or action belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EnvKind {
    #[serde(rename = "frozenlake", alias = "maze")]
    FrozenLake,
    #[serde(rename = "minibehavior", alias = "fetch")]
    MiniBehavior,
    #[serde(rename = "languagetable", alias = "table")]
    LanguageTable,
}

impl EnvKind {
    pub const ALL: [EnvKind; 3] = [
        EnvKind::FrozenLake,
        EnvKind::MiniBehavior,
        EnvKind::LanguageTable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnvKind::FrozenLake => "frozenlake",
            EnvKind::MiniBehavior => "minibehavior",
            EnvKind::LanguageTable => "languagetable",
        }
    }

    /// Size of the full action alphabet (sentinels excluded).
    pub fn alphabet_size(self) -> usize {
        match self {
            EnvKind::FrozenLake => 4,
            EnvKind::MiniBehavior => 5,
            EnvKind::LanguageTable => {
                BlockId::ALL.len() * (BlockId::ALL.len() - 1)
                    + BlockId::ALL.len() * SlotId::ALL.len()
            }
        }
    }

    /// Every action of this environment, in a fixed order.
    pub fn alphabet(self) -> Vec<Action> {
        match self {
            EnvKind::FrozenLake => Direction::ALL
                .iter()
                .map(|&d| Action::MazeMove(d))
                .collect(),
            EnvKind::MiniBehavior => vec![
                Action::Turn(Side::Left),
                Action::Turn(Side::Right),
                Action::MoveForward,
                Action::PickUpApple,
                Action::DropAppleOnTable,
            ],
            EnvKind::LanguageTable => {
                let mut out = Vec::with_capacity(self.alphabet_size());
                for &src in &BlockId::ALL {
                    for &dst in &BlockId::ALL {
                        if src != dst {
                            out.push(Action::MoveBlockToBlock { src, dst });
                        }
                    }
                    for &dst in &SlotId::ALL {
                        out.push(Action::MoveBlockToPosition { src, dst });
                    }
                }
                out
            }
        }
    }
}

impl fmt::Display for EnvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnvKind {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s
            .trim()
            .to_ascii_lowercase()
            .replace(['-', '_', ' '], "")
            .as_str()
        {
            "frozenlake" | "maze" => Ok(EnvKind::FrozenLake),
            "minibehavior" | "fetch" => Ok(EnvKind::MiniBehavior),
            "languagetable" | "table" => Ok(EnvKind::LanguageTable),
            _ => Err(ParseError::UnknownEnv(s.to_string())),
        }
    }
}

/// Grid heading. Maze moves and the fetch agent's facing share this type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Left,
    Down,
    Right,
    Up,
}

impl Direction {
    /// Maze action-id order: 0 left, 1 down, 2 right, 3 up.
    pub const ALL: [Direction; 4] = [
        Direction::Left,
        Direction::Down,
        Direction::Right,
        Direction::Up,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Direction::Left => "left",
            Direction::Down => "down",
            Direction::Right => "right",
            Direction::Up => "up",
        }
    }

    /// `(d_row, d_col)` with rows growing downwards.
    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::Left => (0, -1),
            Direction::Down => (1, 0),
            Direction::Right => (0, 1),
            Direction::Up => (-1, 0),
        }
    }

    /// up -> left -> down -> right -> up
    pub fn turned_left(self) -> Direction {
        match self {
            Direction::Up => Direction::Left,
            Direction::Left => Direction::Down,
            Direction::Down => Direction::Right,
            Direction::Right => Direction::Up,
        }
    }

    /// up -> right -> down -> left -> up
    pub fn turned_right(self) -> Direction {
        match self {
            Direction::Up => Direction::Right,
            Direction::Right => Direction::Down,
            Direction::Down => Direction::Left,
            Direction::Left => Direction::Up,
        }
    }

    fn from_word(w: &str) -> Option<Direction> {
        Direction::ALL.iter().copied().find(|d| d.name() == w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

macro_rules! named_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant),+
        }

        impl $name {
            pub const ALL: [$name; [$($text),+].len()] = [$($name::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }

            /// Accepts `blue_moon`, `blue moon`, `Blue-Moon`.
            pub fn from_name(s: &str) -> Option<$name> {
                let key = s.trim().to_ascii_lowercase().replace([' ', '-'], "_");
                $name::ALL.iter().copied().find(|v| v.name() == key)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
    };
}

named_enum!(
    /// The eight tabletop blocks.
    BlockId {
        BlueMoon => "blue_moon",
        BlueCube => "blue_cube",
        GreenStar => "green_star",
        GreenCube => "green_cube",
        YellowStar => "yellow_star",
        YellowPentagon => "yellow_pentagon",
        RedMoon => "red_moon",
        RedPentagon => "red_pentagon",
    }
);

named_enum!(
    /// The eight absolute table positions.
    SlotId {
        TopCenter => "top_center",
        TopLeft => "top_left",
        TopRight => "top_right",
        CenterLeft => "center_left",
        CenterRight => "center_right",
        BottomCenter => "bottom_center",
        BottomLeft => "bottom_left",
        BottomRight => "bottom_right",
    }
);

/// A planner action. `NoChange` and `Inexplicable` are only ever produced by
/// inverse-dynamics inference and belong to no environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Action {
    MazeMove(Direction),
    Turn(Side),
    MoveForward,
    PickUpApple,
    DropAppleOnTable,
    MoveBlockToBlock { src: BlockId, dst: BlockId },
    MoveBlockToPosition { src: BlockId, dst: SlotId },
    NoChange,
    Inexplicable,
}

/// Canonical `(verb, object, target)` form used for semantic matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NormalizedAction {
    pub verb: &'static str,
    pub object: &'static str,
    pub target: &'static str,
}

impl Action {
    /// The environment this action belongs to; `None` for the inference sentinels.
    pub fn env(&self) -> Option<EnvKind> {
        match self {
            Action::MazeMove(_) => Some(EnvKind::FrozenLake),
            Action::Turn(_)
            | Action::MoveForward
            | Action::PickUpApple
            | Action::DropAppleOnTable => Some(EnvKind::MiniBehavior),
            Action::MoveBlockToBlock { .. } | Action::MoveBlockToPosition { .. } => {
                Some(EnvKind::LanguageTable)
            }
            Action::NoChange | Action::Inexplicable => None,
        }
    }

    pub fn is_sentinel(&self) -> bool {
        self.env().is_none()
    }

    pub fn normalize(&self) -> NormalizedAction {
        let (verb, object, target) = match *self {
            Action::MazeMove(d) => ("go", d.name(), ""),
            Action::Turn(s) => ("turn", s.name(), ""),
            Action::MoveForward => ("forward", "", ""),
            Action::PickUpApple => ("pickup", "apple", ""),
            Action::DropAppleOnTable => ("drop", "apple", "table"),
            Action::MoveBlockToBlock { src, dst } => ("move", src.name(), dst.name()),
            Action::MoveBlockToPosition { src, dst } => ("move", src.name(), dst.name()),
            Action::NoChange => ("none", "", ""),
            Action::Inexplicable => ("inexplicable", "", ""),
        };
        NormalizedAction {
            verb,
            object,
            target,
        }
    }

    /// Log rendering: lowercase, space separated, underscores inside identifiers.
    pub fn render(&self) -> String {
        match *self {
            Action::MazeMove(d) => format!("go {}", d.name()),
            Action::Turn(s) => format!("turn {}", s.name()),
            Action::MoveForward => "move forward".to_string(),
            Action::PickUpApple => "pick up apple".to_string(),
            Action::DropAppleOnTable => "drop apple on the table".to_string(),
            Action::MoveBlockToBlock { src, dst } => format!("move {src} to {dst}"),
            Action::MoveBlockToPosition { src, dst } => format!("move {src} to {dst}"),
            Action::NoChange => "no change".to_string(),
            Action::Inexplicable => "inexplicable".to_string(),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl From<Action> for String {
    fn from(a: Action) -> String {
        a.render()
    }
}

impl TryFrom<String> for Action {
    type Error = ParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl FromStr for Action {
    type Err = ParseError;

    /// Parses against every environment; the alphabets are disjoint.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EnvKind::ALL
            .iter()
            .find_map(|&k| parse_action(s, k).ok())
            .ok_or_else(|| ParseError::NoMatch {
                text: s.to_string(),
                env: None,
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("`{text}` is not an action of {}", env.map(|e| e.name()).unwrap_or("any environment"))]
    NoMatch { text: String, env: Option<EnvKind> },
    #[error("unknown environment `{0}`")]
    UnknownEnv(String),
}

fn tokenize(text: &str) -> Vec<String> {
    let cleaned: String = text
        .to_lowercase()
        .chars()
        .map(|c| match c {
            '_' | '-' => ' ',
            c if c.is_alphanumeric() || c.is_whitespace() => c,
            _ => ' ',
        })
        .collect();
    cleaned
        .split_whitespace()
        .filter(|w| !matches!(*w, "the" | "a" | "an"))
        .map(str::to_string)
        .collect()
}

/// Parses `text` as an action of `env`.
///
/// Case, articles, punctuation and underscores-vs-spaces are ignored. The
/// sentinels `no change` and `inexplicable` parse in every environment.
pub fn parse_action(text: &str, env: EnvKind) -> Result<Action, ParseError> {
    let tokens = tokenize(text);
    let words: Vec<&str> = tokens.iter().map(String::as_str).collect();
    let no_match = || ParseError::NoMatch {
        text: text.to_string(),
        env: Some(env),
    };

    match words.as_slice() {
        ["no", "change"] | ["nochange"] | ["none"] => return Ok(Action::NoChange),
        ["inexplicable"] => return Ok(Action::Inexplicable),
        _ => {}
    }

    let parsed = match env {
        EnvKind::FrozenLake => match words.as_slice() {
            [dir] | ["go" | "move", dir] => Direction::from_word(dir).map(Action::MazeMove),
            _ => None,
        },
        EnvKind::MiniBehavior => match words.as_slice() {
            ["turn", "left"] => Some(Action::Turn(Side::Left)),
            ["turn", "right"] => Some(Action::Turn(Side::Right)),
            ["move" | "go", "forward"] | ["forward"] => Some(Action::MoveForward),
            ["pick", "up"]
            | ["pick", "up", "apple"]
            | ["pickup"]
            | ["pickup", "apple"]
            | ["pick", "apple", "up"] => Some(Action::PickUpApple),
            ["drop"]
            | ["drop", "apple"]
            | ["drop", "apple", "on", "table"]
            | ["drop", "on", "table"] => Some(Action::DropAppleOnTable),
            _ => None,
        },
        EnvKind::LanguageTable => parse_table_move(&words),
    };
    parsed.ok_or_else(no_match)
}

fn parse_table_move(words: &[&str]) -> Option<Action> {
    let ["move", rest @ ..] = words else {
        return None;
    };
    let to = rest.iter().position(|w| *w == "to")?;
    let src = BlockId::from_name(&rest[..to].join("_"))?;
    let target = rest[to + 1..].join("_");
    if let Some(dst) = BlockId::from_name(&target) {
        return Some(Action::MoveBlockToBlock { src, dst });
    }
    SlotId::from_name(&target).map(|dst| Action::MoveBlockToPosition { src, dst })
}
