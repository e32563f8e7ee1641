"""
실행 설정, 컨텍스트, 명령 실행 엔진
"""
