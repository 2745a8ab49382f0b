use super::CryptoError;

/// Symbols in code order: `A` is 01, `Z` is 26, then space, `?`, `,`, `.`.
pub const ALPHABET: [char; 30] = [
    'A', 'B', 'C', 'D', 'E', 'F', 'G', 'H', 'I', 'J', 'K', 'L', 'M', 'N', 'O', 'P', 'Q', 'R', 'S',
    'T', 'U', 'V', 'W', 'X', 'Y', 'Z', ' ', '?', ',', '.',
];

fn code_of(c: char) -> Option<u8> {
    let upper = c.to_ascii_uppercase();
    ALPHABET
        .iter()
        .position(|&s| s == upper)
        .map(|i| i as u8 + 1)
}

/// Text to codes 1..=30. Lowercase letters are folded to uppercase.
pub fn encode_text(text: &str) -> Result<Vec<u8>, CryptoError> {
    text.chars()
        .enumerate()
        .map(|(position, character)| {
            code_of(character).ok_or(CryptoError::UnsupportedCharacter {
                position,
                character,
            })
        })
        .collect()
}

pub fn decode_text(codes: &[u8]) -> Result<String, CryptoError> {
    codes
        .iter()
        .enumerate()
        .map(|(position, &code)| match code {
            1..=30 => Ok(ALPHABET[usize::from(code) - 1]),
            _ => Err(CryptoError::InvalidCode {
                position,
                code: u32::from(code),
            }),
        })
        .collect()
}

/// Space-separated two-digit rendering, e.g. `08 05 12`.
pub fn render_codes(codes: &[u8]) -> String {
    codes
        .iter()
        .map(|c| format!("{c:02}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Inverse of [`render_codes`]; any whitespace separates codes.
pub fn parse_codes(text: &str) -> Result<Vec<u8>, CryptoError> {
    text.split_whitespace()
        .enumerate()
        .map(|(position, token)| {
            let code: u32 = token
                .parse()
                .map_err(|_| CryptoError::MalformedCode(token.to_string()))?;
            if (1..=30).contains(&code) {
                Ok(code as u8)
            } else {
                Err(CryptoError::InvalidCode { position, code })
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hello_roger() {
        let codes = encode_text("HELLO ROGER.").unwrap();
        assert_eq!(render_codes(&codes), "08 05 12 12 15 27 18 15 07 05 18 30");
    }

    #[test]
    fn single_letter_and_roundtrip() {
        assert_eq!(encode_text("A").unwrap(), vec![1]);
        assert_eq!(decode_text(&encode_text("WHY?").unwrap()).unwrap(), "WHY?");
        assert_eq!(encode_text("why?").unwrap(), encode_text("WHY?").unwrap());
    }

    #[test]
    fn rejects_foreign_symbols() {
        assert_eq!(
            encode_text("HI!"),
            Err(CryptoError::UnsupportedCharacter {
                position: 2,
                character: '!'
            })
        );
        assert!(decode_text(&[0]).is_err());
        assert!(decode_text(&[31]).is_err());
        assert!(parse_codes("01 31").is_err());
        assert!(parse_codes("01 x").is_err());
    }

    #[test]
    fn every_symbol_has_its_code() {
        for (i, &c) in ALPHABET.iter().enumerate() {
            assert_eq!(encode_text(&c.to_string()).unwrap(), vec![i as u8 + 1]);
        }
        assert_eq!(
            parse_codes("27 28 29 30").unwrap(),
            encode_text(" ?,.").unwrap()
        );
    }
}
