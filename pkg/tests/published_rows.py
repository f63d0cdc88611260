# published (domain, act, precision, recall, F1) result rows; 56 act rows + 4 overall rows
PUBLISHED_ROWS = [
    ("Banks", "Agree", 90.57, 97.96, 94.12),
    ("Banks", "Closing", 100, 100, 100),
    ("Banks", "Confirm_Question", 32.56, 45.16, 37.84),
    ("Banks", "Disagree", 100, 60, 75),
    ("Banks", "Greeting", 92.86, 96.3, 94.55),
    ("Banks", "MissUnderstandingSign", 60, 75, 66.67),
    ("Banks", "Other_Answer", 46.15, 40, 42.86),
    ("Banks", "Other_Question", 71.43, 38.46, 50),
    ("Banks", "Pausing", 50, 25, 33.33),
    ("Banks", "SelfIntroduce", 100, 30, 46.15),
    ("Banks", "Service_Answer", 69.07, 81.71, 74.86),
    ("Banks", "Service_Question", 78.26, 56.25, 65.45),
    ("Banks", "Taking_Request", 100, 100, 100),
    ("Banks", "Thanking", 69.23, 81.82, 75),
    ("Banks", "Turn_Assgin", 72.73, 100, 84.21),
    ("Banks", "Over All", 72.75, 72.75, 72.75),
    ("Flights", "Agree", 93.42, 84.52, 88.75),
    ("Flights", "Closing", 100, 100, 100),
    ("Flights", "Confirm_Question", 44.44, 26.09, 32.88),
    ("Flights", "Disagree", 33.33, 18.18, 23.53),
    ("Flights", "Greeting", 90.91, 88.24, 89.55),
    ("Flights", "Other_Answer", 29.17, 58.33, 38.89),
    ("Flights", "Other_Question", 37.5, 50, 42.86),
    ("Flights", "Pausing", 25, 16.67, 20),
    ("Flights", "SelfIntroduce", 92.86, 100, 96.3),
    ("Flights", "Service_Answer", 59.77, 71.23, 65),
    ("Flights", "Service_Question", 48.89, 64.71, 55.7),
    ("Flights", "Thanking", 70, 63.64, 66.67),
    ("Flights", "Turn_Assgin", 66.67, 57.14, 61.54),
    ("Flights", "Over All", 65, 64.11, 64.55),
    ("MobileNetworkOperators", "Agree", 65.52, 63.33, 64.41),
    ("MobileNetworkOperators", "Apology", 100, 25, 40),
    ("MobileNetworkOperators", "Confirm_Question", 66.67, 58.33, 62.22),
    ("MobileNetworkOperators", "Disagree", 50, 60, 54.55),
    ("MobileNetworkOperators", "Greeting", 91.3, 84, 87.5),
    ("MobileNetworkOperators", "Other_Question", 81.82, 90, 85.71),
    ("MobileNetworkOperators", "Pausing", 100, 63.64, 77.78),
    ("MobileNetworkOperators", "SelfIntroduce", 100, 76.92, 86.96),
    ("MobileNetworkOperators", "Service_Answer", 64.29, 88.52, 74.48),
    ("MobileNetworkOperators", "Service_Question", 58.33, 80, 67.47),
    ("MobileNetworkOperators", "Thanking", 90.91, 83.33, 86.96),
    ("MobileNetworkOperators", "Turn_Assgin", 60, 81.82, 69.23),
    ("MobileNetworkOperators", "Over All", 68.01, 68.27, 68.14),
    ("Combined", "Agree", 86.94, 91.04, 88.94),
    ("Combined", "Apology", 100, 50, 66.67),
    ("Combined", "Closing", 100, 100, 100),
    ("Combined", "Confirm_Question", 40, 33.66, 36.56),
    ("Combined", "Disagree", 76.47, 50, 60.47),
    ("Combined", "Greeting", 91.57, 88.37, 89.94),
    ("Combined", "MissUnderstandingSign", 100, 20, 33.33),
    ("Combined", "Other_Answer", 39.02, 47.06, 42.67),
    ("Combined", "Other_Question", 58.33, 60, 59.15),
    ("Combined", "Pausing", 71.43, 47.62, 57.14),
    ("Combined", "SelfIntroduce", 96.43, 75, 84.37),
    ("Combined", "Service_Answer", 67.44, 80.56, 73.42),
    ("Combined", "Service_Question", 60.83, 72.28, 66.06),
    ("Combined", "Taking_Request", 100, 75, 85.71),
    ("Combined", "Thanking", 77.14, 79.41, 78.26),
    ("Combined", "Turn_Assgin", 76.67, 88.46, 82.14),
    ("Combined", "Over All", 70.61, 70.12, 70.36),
]
