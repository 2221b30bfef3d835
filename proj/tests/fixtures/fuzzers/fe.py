def fuzzer_fe(random: Random) -> str:
    return ''
