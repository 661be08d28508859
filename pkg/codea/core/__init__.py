# Core optimization logic
